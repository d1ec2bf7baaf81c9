"""Allow ``python -m gridswarm``."""

from .cli import main

if __name__ == "__main__":  # pragma: no cover - module executable
    raise SystemExit(main())
