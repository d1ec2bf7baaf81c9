"""Bundled example worlds and their manifest."""

__all__: list[str] = []
