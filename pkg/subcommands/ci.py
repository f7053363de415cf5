"""
CI
==

Extension computing a confidence interval for theta2.

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

from core.formatting import write_json
from core.intervals import check_alpha, ci_partial, ci_regularized, ci_standard
from core.models import Method
from subcommands import Command

if TYPE_CHECKING:
    from holderim import HolderIM


class ConfidenceInterval(Command):
    name = "ci"
    help = "Confidence interval for theta2 at level 1 - alpha (JSON object)."

    def run(self, args: argparse.Namespace, out: TextIO) -> int:
        alpha = check_alpha(args.alpha)
        lam = self.app.penalty_weight(args)
        y = self.app.observation(args)
        if args.method is Method.STANDARD:
            interval = ci_standard(y.y2, alpha)
        elif args.method is Method.PARTIAL:
            interval = ci_partial(y, alpha, args.B, lam)
        else:
            interval = ci_regularized(y, alpha, args.B, lam)
        payload = {
            "method": args.method.value,
            "lambda": lam,
            "lower": float(interval.lower),
            "upper": float(interval.upper),
            "length": float(interval.length),
            "alpha": alpha,
            "B": args.B,
        }
        write_json(payload, out)
        return 0


def setup(app: "HolderIM") -> None:
    app.add_command(ConfidenceInterval(app))
