"""Tests covering the script and ``python -m`` entry points."""

from __future__ import annotations

import runpy
from typing import Any

import pytest

import gridswarm.cli
import main


def test_script_delegates_to_cli() -> None:
    assert main.main is gridswarm.cli.main


def test_script_lists_worlds(monkeypatch: Any, tmp_path: Any, capsys: Any) -> None:
    monkeypatch.chdir(tmp_path)

    assert main.main(["worlds"]) == 0
    assert "corridor-sticky" in capsys.readouterr().out


def test_module_entry_point_exits_with_cli_status(monkeypatch: Any, tmp_path: Any) -> None:
    monkeypatch.chdir(tmp_path)
    monkeypatch.setattr("sys.argv", ["gridswarm", "worlds"])

    with pytest.raises(SystemExit) as excinfo:
        runpy.run_module("gridswarm", run_name="__main__")

    assert excinfo.value.code == 0
