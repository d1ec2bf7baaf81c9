"""Command-line entry point for the gridswarm engine."""

from __future__ import annotations

from gridswarm.cli import main

if __name__ == "__main__":  # pragma: no cover - script entry point
    raise SystemExit(main())
