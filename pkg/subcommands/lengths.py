"""
Lengths
=======

Extension tabulating both interval lengths as functions of the penalty weight.

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
import logging
from typing import TYPE_CHECKING, TextIO

import numpy as np

from core.formatting import CsvTable
from core.inference import check_bound
from core.intervals import check_alpha, lambda1_star, lambda2_star, len_L1, len_L2, optimal_length_L1
from core.models import SweepSpec, SweepVariable
from subcommands import Command

if TYPE_CHECKING:
    from holderim import HolderIM

log = logging.getLogger(__name__)

DEFAULT_SWEEP = SweepSpec(SweepVariable.LAMBDA, 0.0, 10.0, 201)


class Lengths(Command):
    name = "lengths"
    help = "Interval lengths L1 and L2 over a lambda grid, followed by argmin rows (CSV: lambda,L1,L2)."

    def run(self, args: argparse.Namespace, out: TextIO) -> int:
        alpha, B = check_alpha(args.alpha), check_bound(args.B)
        grid = self.app.sweep(args, DEFAULT_SWEEP).grid()
        lengths_L1 = np.array([len_L1(float(lam), alpha, B) for lam in grid])
        lengths_L2 = np.array([len_L2(float(lam), alpha, B) for lam in grid])

        table = CsvTable("lambda", "L1", "L2")
        for lam, length_L1, length_L2 in zip(grid, lengths_L1, lengths_L2):
            table.add_row(lam, length_L1, length_L2)

        for label, lengths in (("L1", lengths_L1), ("L2", lengths_L2)):
            index = int(np.argmin(lengths))
            table.add_row(f"grid_argmin:{label}", grid[index], lengths[index])
        if B > 0:
            table.add_row("optimum:L1", lambda1_star(alpha, B), optimal_length_L1(alpha, B))
            tuned = lambda2_star(alpha, B, self.app.bracket_config())
            table.add_row("optimum:L2", tuned.lambda_star, tuned.length_star)
        else:
            log.info("B = 0: lengths decrease towards sqrt(2) z as lambda -> inf, no optimum rows")

        table.write(out)
        return 0


def setup(app: "HolderIM") -> None:
    app.add_command(Lengths(app))
