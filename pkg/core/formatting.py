"""
Formatting
==========

Machine-readable rendering of command results: CSV tables and JSON objects.

Every numeric CSV field is printed with `CSV_DIGITS` significant digits, `.` as decimal point
and no locale dependence, so repeated invocations produce byte-identical output.

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
import csv
import json
import math
from numbers import Integral, Real
from typing import Any, TextIO

from core.constants import CSV_DIGITS


def format_field(value: Any) -> str:
    """Format a CSV field: numbers with fixed significant digits, anything else as text."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Integral):
        return str(int(value))
    if isinstance(value, Real):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        # normalise -0 so that symmetric grids print identically
        return f"{value + 0.0:.{CSV_DIGITS}g}"
    return str(value)


class CsvTable:
    """CSV table with a header row, rendered with `format_field`."""

    __slots__ = ("header", "rows")

    def __init__(self, *header: str) -> None:
        self.header = header
        self.rows: list[list[str]] = []

    def add_row(self, *values: Any) -> None:
        """Append a row; the number of values must match the header."""
        if len(values) != len(self.header):
            raise ValueError(f"Row has {len(values)} fields, header has {len(self.header)}.")
        self.rows.append([format_field(value) for value in values])

    def write(self, stream: TextIO) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(self.header)
        writer.writerows(self.rows)


def write_json(payload: Any, stream: TextIO) -> None:
    """Write `payload` as indented JSON followed by a newline."""
    json.dump(payload, stream, indent=2, allow_nan=False)
    stream.write("\n")
