"""Exact order types of small planar point sets, flag-algebra densities and limit models."""

import json

from ._ordertypes import Database, UnknownCode, cup_probability, estimate, run

__all__ = ["Database", "UnknownCode", "cup_probability", "estimate", "run", "run_json"]


def run_json(*args):
    """Run the command line with --format json and return (exit code, parsed report or None)."""
    code, out, _ = run(["--format", "json", *map(str, args)])
    return code, (json.loads(out) if out.strip() else None)
