# Utils package for MCP Server 