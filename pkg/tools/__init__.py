# Tools package for MCP Server 