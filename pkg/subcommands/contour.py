"""
Contour
=======

Extension evaluating possibility contours for theta2 over a grid.

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
from typing import TYPE_CHECKING, TextIO

from core.formatting import CsvTable
from core.inference import check_bound, contour_marginal_t1, contour_marginal_t2, contour_standard
from core.models import Method, SweepSpec, SweepVariable
from subcommands import Command

if TYPE_CHECKING:
    from holderim import HolderIM

GRID_HALF_WIDTH = 4.0
GRID_STEPS = 161


class Contour(Command):
    name = "contour"
    help = "Marginal possibility contour for theta2 (CSV: theta2,method,lambda,B,possibility)."

    def run(self, args: argparse.Namespace, out: TextIO) -> int:
        B = check_bound(args.B)
        lam = self.app.penalty_weight(args)
        y = self.app.observation(args)
        default = SweepSpec(SweepVariable.THETA2, y.y2 - GRID_HALF_WIDTH, y.y2 + GRID_HALF_WIDTH, GRID_STEPS)
        table = CsvTable("theta2", "method", "lambda", "B", "possibility")
        for theta2 in self.app.sweep(args, default).grid():
            # scalar calls so every row equals the library value for that theta2
            theta2 = float(theta2)
            if args.method is Method.STANDARD:
                possibility = contour_standard(y.y2, theta2)
            elif args.method is Method.PARTIAL:
                possibility = contour_marginal_t1(y, theta2, lam, B)
            else:
                possibility = contour_marginal_t2(y, theta2, lam, B)
            table.add_row(theta2, args.method.value, lam, B, possibility)
        table.write(out)
        return 0


def setup(app: "HolderIM") -> None:
    app.add_command(Contour(app))
