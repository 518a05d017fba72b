"""Gradual Soundness Playground: a gradually-sound core language toolchain."""

__version__ = "1.0.0"
