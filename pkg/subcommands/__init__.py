"""
Subcommands
===========

Extensions registering the holderim commands. Each module exposes `setup(app)`.

Copyright (C) 2024 The holderim developers

This program is free software: you can redistribute it and/or modify
it under the terms of the GNU Affero General Public License as
published by the Free Software Foundation, either version 3 of the
License, or (at your option) any later version.

This program is distributed in the hope that it will be useful,
but WITHOUT ANY WARRANTY; without even the implied warranty of
MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
GNU Affero General Public License for more details.

You should have received a copy of the GNU Affero General Public License
along with this program.  If not, see <https://www.gnu.org/licenses/>.
"""
import argparse
import math
from typing import TYPE_CHECKING, TextIO

if TYPE_CHECKING:
    from holderim import HolderIM


def parse_finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text!r}")
    return value


class Command:
    """Base class for commands; subclasses set `name` and `help` and implement `run`."""

    name: str
    help: str

    def __init__(self, app: "HolderIM") -> None:
        self.app = app

    def configure(self, parser: argparse.ArgumentParser) -> None:
        """Add command-specific arguments to `parser`."""

    def run(self, args: argparse.Namespace, out: TextIO) -> int:
        """Run the command, writing results to `out`, and return the exit status."""
        raise NotImplementedError
