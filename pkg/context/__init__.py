# Context package for MCP Server 