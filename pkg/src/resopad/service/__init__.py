"""HTTP/WebSocket service around the engine."""
