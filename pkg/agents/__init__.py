# Agents package for MCP Server 