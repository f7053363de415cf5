"""
Validate
========

Extension running Monte Carlo validity audits.

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
from core.models import McConfig, MeanPair
from core.validation import simulate_contour_validity, simulate_coverage
from subcommands import Command, parse_finite

if TYPE_CHECKING:
    from holderim import HolderIM

AUDITS = ("ci", "joint", "marginal")


class Validate(Command):
    name = "validate"
    help = "Monte Carlo validity audit at true means (theta1, theta2); exits 1 if the 3-sigma band is violated (JSON)."

    def configure(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--theta1", type=parse_finite, default=0.0, help="true mean of Y1")
        parser.add_argument("--theta2", type=parse_finite, default=0.0, help="true mean of Y2")
        parser.add_argument(
            "--audit",
            choices=AUDITS,
            default="ci",
            help="interval coverage (ci) or contour validity over an alpha grid (joint, marginal)",
        )

    def run(self, args: argparse.Namespace, out: TextIO) -> int:
        config = McConfig(
            theta_true=MeanPair(args.theta1, args.theta2),
            B=args.B,
            alpha=args.alpha,
            method=args.method,
            lam=args.lam,
            tune=args.tune,
            n_reps=args.reps,
            seed=args.seed,
            block_size=self.app.block_size,
            bracket=self.app.bracket_config(),
        )
        if args.tune:
            # surfaces the B = 0 limit as a usage error before any replication is drawn
            self.app.penalty_weight(args)

        if args.audit == "ci":
            report = simulate_coverage(config, workers=args.workers)
            write_json(report.to_dict(), out)
            return 0 if report.is_valid() else 1

        reports = simulate_contour_validity(config, args.audit == "marginal", workers=args.workers)
        write_json([report.to_dict() for report in reports], out)
        return 0 if all(report.is_valid() for report in reports) else 1


def setup(app: "HolderIM") -> None:
    app.add_command(Validate(app))
