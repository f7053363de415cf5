"""
Compare
=======

Extension comparing the standard interval with the two tuned intervals over a range of bounds B.

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
import math
from typing import TYPE_CHECKING, TextIO

from core.formatting import CsvTable
from core.intervals import (
    check_alpha,
    critical_value,
    lambda1_star,
    lambda2_star,
    optimal_length_L1,
    optimal_length_L2,
)
from core.models import SweepSpec, SweepVariable
from subcommands import Command

if TYPE_CHECKING:
    from holderim import HolderIM

log = logging.getLogger(__name__)

DEFAULT_SWEEP = SweepSpec(SweepVariable.B, 0.0, 2.2, 111)


class Compare(Command):
    name = "compare"
    help = "Optimal interval lengths over a grid of bounds B (CSV)."

    def run(self, args: argparse.Namespace, out: TextIO) -> int:
        alpha = check_alpha(args.alpha)
        len_standard = 2 * critical_value(alpha)
        bracket_config = self.app.bracket_config()
        table = CsvTable(
            "B", "len_standard", "len_partial_opt", "lambda1_star", "len_regularized_opt", "lambda2_star"
        )
        for B in self.app.sweep(args, DEFAULT_SWEEP).grid():
            B = float(B)
            if B == 0:
                log.info("B = 0: using the lambda -> inf limit sqrt(2) z for both optimal lengths")
                limit = optimal_length_L2(alpha, 0.0)
                table.add_row(B, len_standard, limit, math.inf, limit, math.inf)
                continue
            tuned = lambda2_star(alpha, B, bracket_config)
            table.add_row(
                B,
                len_standard,
                optimal_length_L1(alpha, B),
                lambda1_star(alpha, B),
                tuned.length_star,
                tuned.lambda_star,
            )
        table.write(out)
        return 0


def setup(app: "HolderIM") -> None:
    app.add_command(Compare(app))
