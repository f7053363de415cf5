"""
Help
====

Help text for the holderim command line.

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
from typing import Iterable, Mapping

DESCRIPTION = (
    "Valid possibilistic inference for theta2 in the two-normal-means problem Y1 ~ N(theta1, 1), "
    "Y2 ~ N(theta2, 1) under the Hölder constraint |theta2 - theta1| <= B. Commands print CSV tables or "
    "JSON objects to standard output (or to --out FILE) for piping into any plotting tool."
)


class HolderIMHelpFormatter(argparse.RawDescriptionHelpFormatter):
    """Help formatter keeping paragraph breaks and showing flag defaults."""

    def _get_help_string(self, action: argparse.Action) -> str | None:
        help_string = action.help
        if help_string and "%(default)" not in help_string and action.default not in (None, False, argparse.SUPPRESS):
            help_string += " (default: %(default)s)"
        return help_string


def format_description(version: str, missing_extensions: Iterable[str] = ()) -> str:
    """Format the top-level description, noting extensions that failed to load."""
    description = [f"holderim v{version}", DESCRIPTION]
    if missing := sorted(missing_extensions):
        description.append(f"Important: the following commands failed to load: {', '.join(missing)}.")
    return "\n\n".join(description)


def format_epilog(command_help: Mapping[str, str]) -> str:
    """Format the list of commands shown below the top-level usage."""
    max_size = max((len(name) for name in command_help), default=0)
    lines = ["Commands:"]
    lines.extend(f"  {name: <{max_size}}  {help_text}" for name, help_text in sorted(command_help.items()))
    lines.append("")
    lines.append("Type holderim COMMAND --help for more info on a command.")
    return "\n".join(lines)
