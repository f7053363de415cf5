"""
holderim
========

Valid possibilistic inference for the two-normal-means problem under a Hölder constraint.

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
import importlib
import io
import logging
import math
import sys
from types import ModuleType, SimpleNamespace
from typing import Any, Sequence

from core.constants import DEFAULT_ALPHA, DEFAULT_BLOCK_SIZE, DEFAULT_REPS, DEFAULT_SEED, DEFAULT_Y1, DEFAULT_Y2
from core.help import HolderIMHelpFormatter, format_description, format_epilog
from core.inference import check_penalty
from core.intervals import critical_value, lambda1_star, lambda2_star
from core.models import BracketConfig, Method, Observation, SweepSpec
from core.optimize import BracketError
from core.specfun import DomainError
from subcommands import Command, parse_finite

__version__ = "0.1.0"

EXTENSIONS = ("contour", "ci", "lengths", "compare", "validate", "quantiles")
METHOD_ALIASES = {"t1": Method.PARTIAL, "t2": Method.REGULARIZED}

log = logging.getLogger(__name__)

_handlers: list[logging.Handler] = []


def parse_method(text: str) -> Method:
    """Parse a method name, accepting `t1`/`t2` for the statistic behind each interval."""
    if text in METHOD_ALIASES:
        return METHOD_ALIASES[text]
    try:
        return Method(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"invalid method {text!r} (choose from standard, partial, regularized, t1, t2)"
        ) from None


def parse_sweep(text: str) -> SweepSpec:
    try:
        return SweepSpec.parse(text)
    except DomainError as error:
        raise argparse.ArgumentTypeError(str(error)) from None


class HolderIM:
    """Command-line application: argument parsing and subcommand dispatch."""

    def __init__(self) -> None:
        self.commands: dict[str, Command] = {}
        self.missing_extensions: set[str] = set()

    @property
    def config(self) -> ModuleType | SimpleNamespace:
        """Optional user configuration module `config.py`."""
        try:
            return importlib.import_module("config")
        except ModuleNotFoundError:
            return SimpleNamespace()

    def setting(self, name: str, default: Any) -> Any:
        """Look up a configuration value, falling back to `default`."""
        return getattr(self.config, name, default)

    def bracket_config(self) -> BracketConfig:
        """Bracket settings for penalty weight tuning."""
        return BracketConfig(
            initial_upper=self.setting("bracket_initial_upper", 1.0),
            max_doublings=self.setting("bracket_max_doublings", 60),
            tolerance=self.setting("bracket_tolerance", 1e-8),
        )

    @property
    def block_size(self) -> int:
        return self.setting("block_size", DEFAULT_BLOCK_SIZE)

    def add_command(self, command: Command) -> None:
        """Register a subcommand."""
        if command.name in self.commands:
            raise ValueError(f"Command {command.name!r} is already registered.")
        self.commands[command.name] = command

    def load_extensions(self, *extensions: str) -> None:
        """Import `subcommands.<extension>` modules and let each register its commands."""
        for extension in extensions:
            try:
                importlib.import_module(f"subcommands.{extension}").setup(self)
            except Exception as error:  # pylint: disable=broad-except
                self.missing_extensions.add(extension)
                log.error("Failed to load extension %s: %s", extension, error)
                log.debug("Extension traceback", exc_info=error)

    def _common_parser(self) -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)
        group = common.add_argument_group("common options")
        group.add_argument("--y1", type=parse_finite, default=DEFAULT_Y1, help="observed y1")
        group.add_argument("--y2", type=parse_finite, default=DEFAULT_Y2, help="observed y2")
        group.add_argument("--alpha", type=parse_finite, default=DEFAULT_ALPHA, help="miscoverage rate")
        group.add_argument("--B", type=parse_finite, default=1.0, help="Hölder bound on |theta2 - theta1|")
        group.add_argument("--lambda", dest="lam", type=parse_finite, default=0.0, help="penalty weight")
        group.add_argument(
            "--method",
            type=parse_method,
            default=Method.STANDARD.value,
            metavar="{standard,partial,regularized}",
            help="interval or contour construction (t1 = partial, t2 = regularized)",
        )
        group.add_argument("--tune", action="store_true", help="use the length-optimal penalty weight")
        group.add_argument("--sweep", type=parse_sweep, metavar="VAR:START:STOP:STEPS", help="grid to evaluate")
        group.add_argument("--seed", type=int, default=self.setting("default_seed", DEFAULT_SEED), help="random seed")
        group.add_argument(
            "--reps", type=int, default=self.setting("default_reps", DEFAULT_REPS), help="Monte Carlo replications"
        )
        group.add_argument("--out", metavar="FILE", help="write results to FILE instead of standard output")
        return common

    def build_parser(self) -> argparse.ArgumentParser:
        """Build the argument parser for all registered commands."""
        parser = argparse.ArgumentParser(
            prog="holderim",
            description=format_description(__version__, self.missing_extensions),
            epilog=format_epilog({name: command.help for name, command in self.commands.items()}),
            formatter_class=HolderIMHelpFormatter,
        )
        parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
        parser.add_argument("-v", "--verbose", action="count", default=0, help="log INFO (-v) or DEBUG (-vv) messages")
        parser.add_argument(
            "--workers", type=int, default=self.setting("workers", None), help="Monte Carlo worker threads"
        )
        subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
        common = self._common_parser()
        for name, command in self.commands.items():
            command.configure(
                subparsers.add_parser(
                    name,
                    help=command.help,
                    description=command.help,
                    parents=[common],
                    formatter_class=HolderIMHelpFormatter,
                )
            )
        return parser

    def penalty_weight(self, args: argparse.Namespace) -> float:
        """Penalty weight for the selected method: tuned with `--tune`, else `--lambda` as given."""
        method: Method = args.method
        if method is Method.STANDARD:
            return 0.0
        if not args.tune:
            return check_penalty(args.lam)
        if args.B == 0:
            limit = math.sqrt(2) * critical_value(args.alpha)
            raise DomainError(
                "--tune requires B > 0: at B = 0 the optimal length is only reached as lambda -> inf, "
                f"where both interval lengths tend to sqrt(2) z = {limit:.12g}"
            )
        if method is Method.PARTIAL:
            return lambda1_star(args.alpha, args.B)
        return lambda2_star(args.alpha, args.B, self.bracket_config()).lambda_star

    @staticmethod
    def sweep(args: argparse.Namespace, default: SweepSpec) -> SweepSpec:
        """Sweep from `--sweep`, which must be over the same variable as `default`."""
        requested: SweepSpec = args.sweep or default
        if requested.variable is not default.variable:
            raise DomainError(f"This command sweeps over {default.variable.value}, not {requested.variable.value}.")
        return requested

    @staticmethod
    def observation(args: argparse.Namespace) -> Observation:
        return Observation(args.y1, args.y2)

    def on_command_error(self, error: Exception) -> int:
        """Report a failed command and return the exit status."""
        if isinstance(error, DomainError):
            print(f"holderim: error: {error}", file=sys.stderr)
            return 2
        if isinstance(error, BracketError):
            log.error("Penalty weight tuning failed: %s", error)
        else:
            log.error("%s: %s", error.__class__.__name__, error)
        log.debug("Command traceback", exc_info=error)
        return 1

    def run(self, argv: Sequence[str] | None = None) -> int:
        """Parse `argv`, run the selected command and return its exit status."""
        if not self.commands:
            self.load_extensions(*EXTENSIONS)
        args = self.build_parser().parse_args(argv)
        setup_logging(self.config, args.verbose)
        command = self.commands[args.command]
        try:
            if not args.out:
                return command.run(args, sys.stdout)
            # FILE is only replaced once the command has finished
            buffer = io.StringIO(newline="")
            status = command.run(args, buffer)
            with open(args.out, "w", encoding="utf-8", newline="") as out:
                out.write(buffer.getvalue())
            return status
        except Exception as error:  # pylint: disable=broad-except
            return self.on_command_error(error)


def setup_logging(config: ModuleType | SimpleNamespace, verbosity: int = 0) -> None:
    """Configure the root logger; standard output stays reserved for results."""
    logger = logging.getLogger()
    for handler in _handlers:
        logger.removeHandler(handler)
        handler.close()
    _handlers.clear()

    level = getattr(config, "log_level", "WARNING")
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    if verbosity:
        level = min(level, logging.INFO if verbosity == 1 else logging.DEBUG)
    logger.setLevel(level)

    formatter = logging.Formatter("%(asctime)s:%(levelname)s:%(name)s: %(message)s")
    _handlers.append(logging.StreamHandler(sys.stderr))
    if log_file := getattr(config, "log_file", None):
        _handlers.append(logging.FileHandler(filename=log_file, encoding="utf-8", mode="w"))
    for handler in _handlers:
        handler.setFormatter(formatter)
        logger.addHandler(handler)


def main() -> None:
    sys.exit(HolderIM().run())


if __name__ == "__main__":
    main()
