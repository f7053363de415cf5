"""
Quantiles
=========

Extension tabulating how far the noncentral chi-square(1) quantile root moves with the noncentrality.

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

from core.formatting import CsvTable
from core.intervals import check_alpha
from core.models import SweepSpec, SweepVariable
from core.specfun import DomainError, chisq1_quantile
from subcommands import Command

if TYPE_CHECKING:
    from holderim import HolderIM

DEFAULT_SWEEP = SweepSpec(SweepVariable.SQRT_GAMMA, 0.0, 5.0, 101)


class Quantiles(Command):
    name = "quantiles"
    help = "Quantile root excess sqrt(Q(gamma)) - sqrt(Q(0)) against its bound sqrt(gamma) (CSV)."

    def run(self, args: argparse.Namespace, out: TextIO) -> int:
        level = 1 - check_alpha(args.alpha)
        central_root = math.sqrt(chisq1_quantile(level, 0.0))
        table = CsvTable("sqrt_gamma", "level", "excess", "bound")
        sweep = self.app.sweep(args, DEFAULT_SWEEP)
        if sweep.start < 0:
            raise DomainError(f"sqrt_gamma must be nonnegative, got a sweep starting at {sweep.start!r}.")
        for sqrt_gamma in sweep.grid():
            sqrt_gamma = float(sqrt_gamma)
            excess = math.sqrt(chisq1_quantile(level, sqrt_gamma * sqrt_gamma)) - central_root
            table.add_row(sqrt_gamma, level, excess, sqrt_gamma)
        table.write(out)
        return 0


def setup(app: "HolderIM") -> None:
    app.add_command(Quantiles(app))
