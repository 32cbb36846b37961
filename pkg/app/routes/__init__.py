"""HTTP routers over the engine operations."""
