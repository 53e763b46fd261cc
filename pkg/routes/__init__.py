# Routes package for MCP Server 