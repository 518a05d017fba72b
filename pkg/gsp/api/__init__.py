"""HTTP routers for the playground API."""
