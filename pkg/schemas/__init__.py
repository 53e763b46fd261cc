# Schemas package for MCP Server 