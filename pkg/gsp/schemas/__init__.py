"""Pydantic request, response and diagnostic schemas."""
