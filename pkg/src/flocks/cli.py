"""Command-line front end: scripts, an interactive session, scenarios, checks.

Exit codes: 0 success, 1 command error, 2 check failures, 3 I/O or parse
errors.
"""
from __future__ import annotations

import argparse
import os
import shlex
import sys
from dataclasses import dataclass, field

from . import estate, flock, harness, logic
from .errors import FlocksError
from .harness import TrialConfig

EXIT_OK, EXIT_COMMAND, EXIT_CHECK, EXIT_IO = 0, 1, 2, 3

SCENARIOS = {
    "niamey": """\
# A: Niamey is a town in Nigeria.  B: there is a university in Niamey.
set { A ; B }
contract A & B
believe A | B
contract A
believe B
reset
contract A & B
expand B
believe B
believe A & B
contract B
believe A
""",
    "fukv-contrast": """\
# Order of deletions from { A ; B } under both semantics.
set { A ; B }
contract A & B
contract A
reset
contract A
contract A & B
semantics fukv
reset
contract A & B
contract A
reset
contract A
contract A & B
""",
    "syntax-sensitivity": """\
# ~~A is equivalent to A but a different formula.
set { ~~A } { A ; B }
believe A
believe A & B
set { A } { A ; B }
normalize
believe A
believe A & B
""",
}

HELP = """\
commands:
  load <path> | save <path> | set { f ; ... } { ... }
  show | show history | beliefs | believe <formula>
  contract <formula> | expand <formula> | revise <formula>
  merge <path> | normalize | identical <path> | equiv <path> --depth <n>
  undo | reset | semantics ours|fukv | freshen on|off
  scenario <name> | check <name> [--seed n --trials n --atoms n]
"""


class CommandError(FlocksError):
    pass


@dataclass
class Session:
    flock: frozenset = frozenset()
    auto_freshen: bool = True
    semantics: str = "ours"
    base_dir: str = "."
    history: list = field(default_factory=list)
    origin: frozenset | None = None
    errors: int = 0
    check_failures: int = 0

    def __post_init__(self):
        self.initial = self.flock
        if self.origin is None:
            self.origin = self.flock

    # -- helpers ---------------------------------------------------------

    def _path(self, arg):
        if not arg:
            raise CommandError("missing path")
        return os.path.join(self.base_dir, arg)

    def _formula(self, arg):
        if not arg:
            raise CommandError("missing formula")
        return logic.parse_formula(arg)

    def beliefs(self):
        if self.semantics == "fukv":
            return flock.fukv_belief_formula(self.flock)
        return flock.belief_formula(self.flock)

    def describe(self):
        text = flock.render_flock(self.flock) or "(empty flock)\n"
        return text + f"beliefs: {self.beliefs()}\n"

    def _set(self, command, new):
        self.history.append((command, new, self.origin))
        self.flock = new
        return self.describe()

    # -- dispatch --------------------------------------------------------

    def execute(self, line: str) -> str:
        """Run one command and return its output; failures leave state intact."""
        command = line.strip()
        name, _, arg = command.partition(" ")
        arg = arg.strip()
        handler = getattr(self, "do_" + name.replace("-", "_"), None)
        if handler is None:
            self.errors += 1
            return f"error: unknown command {name!r}\n"
        try:
            return handler(arg, command)
        except (FlocksError, ValueError, OSError) as exc:
            self.errors += 1
            return f"error: {type(exc).__name__}: {exc}\n"

    def do_help(self, arg, command):
        return HELP

    def do_load(self, arg, command):
        new = flock.load_flock(self._path(arg))
        self.origin = new
        return self._set(command, new)

    def do_set(self, arg, command):
        new = flock.parse_inline_flock(arg)
        self.origin = new
        return self._set(command, new)

    def do_save(self, arg, command):
        path = self._path(arg)
        flock.save_flock(self.flock, path)
        return f"saved {arg}\n"

    def do_show(self, arg, command):
        if arg == "history":
            lines = [f"{i}: {cmd}" for i, (cmd, *_) in enumerate(self.history, 1)]
            return "\n".join(lines) + "\n" if lines else "(no history)\n"
        if arg:
            raise CommandError(f"unknown show target {arg!r}")
        return self.describe()

    def do_beliefs(self, arg, command):
        return f"beliefs: {self.beliefs()}\n"

    def do_believe(self, arg, command):
        f = self._formula(arg)
        held = logic.entails([self.beliefs()], f)
        return f"{f}: {'believed' if held else 'not believed'}\n"

    def do_contract(self, arg, command):
        f = self._formula(arg)
        if self.semantics == "fukv":
            return self._set(command, flock.fukv_delete(self.flock, f))
        return self._set(command, flock.contract(self.flock, f))

    def do_expand(self, arg, command):
        f = self._formula(arg)
        new, used = flock.expand(self.flock, f, auto_freshen=self.auto_freshen)
        out = self._set(command, new)
        if used != f:
            out = f"used: {used}\n" + out
        return out

    def do_revise(self, arg, command):
        return self._set(command, flock.revise(self.flock, self._formula(arg)))

    def do_merge(self, arg, command):
        other = flock.load_flock(self._path(arg))
        return self._set(command, flock.merge(self.flock, other))

    def do_normalize(self, arg, command):
        return self._set(command, flock.normalize(self.flock))

    def do_identical(self, arg, command):
        other = flock.load_flock(self._path(arg))
        return f"identical: {'yes' if flock.identical(self.flock, other) else 'no'}\n"

    def do_equiv(self, arg, command):
        parts = shlex.split(arg)
        depth = 2
        if "--depth" in parts:
            i = parts.index("--depth")
            depth = int(parts[i + 1])
            del parts[i:i + 2]
        if len(parts) != 1:
            raise CommandError("usage: equiv <path> --depth <n>")
        other = flock.load_flock(self._path(parts[0]))
        same = estate.behaviorally_equivalent(
            estate.generate(self.flock, True), estate.generate(other, True), depth)
        return f"equivalent (depth {depth}): {'yes' if same else 'no'}\n"

    def do_undo(self, arg, command):
        if not self.history:
            raise CommandError("nothing to undo")
        self.history.pop()
        if self.history:
            _, self.flock, self.origin = self.history[-1]
        else:
            self.flock = self.origin = self.initial
        return self.describe()

    def do_reset(self, arg, command):
        return self._set(command, self.origin)

    def do_semantics(self, arg, command):
        if arg not in ("ours", "fukv"):
            raise CommandError("semantics must be 'ours' or 'fukv'")
        self.semantics = arg
        return f"semantics: {arg}\n"

    def do_freshen(self, arg, command):
        if arg not in ("on", "off"):
            raise CommandError("freshen must be 'on' or 'off'")
        self.auto_freshen = arg == "on"
        return f"auto-freshen: {arg}\n"

    def do_scenario(self, arg, command):
        return scenario(arg)

    def do_check(self, arg, command):
        name, cfg = _parse_check(shlex.split(arg))
        report = harness.run_check(name, cfg)
        if not report.passed:
            self.check_failures += 1
        return report.render()


def _parse_check(argv):
    parser = argparse.ArgumentParser(prog="check", add_help=False, exit_on_error=False)
    parser.add_argument("name")
    _add_trial_options(parser)
    try:
        ns = parser.parse_args(argv)
    except (argparse.ArgumentError, SystemExit) as exc:
        raise CommandError(f"bad check arguments: {' '.join(argv)}") from exc
    return ns.name, _trial_config(ns)


def _add_trial_options(parser):
    defaults = TrialConfig()
    parser.add_argument("--seed", type=int, default=defaults.seed)
    parser.add_argument("--trials", type=int, default=defaults.trials)
    parser.add_argument("--atoms", type=int, default=defaults.atoms)
    parser.add_argument("--max-bases", type=int, default=defaults.max_bases)
    parser.add_argument("--max-base-size", type=int, default=defaults.max_base_size)
    parser.add_argument("--max-depth", type=int, default=defaults.max_formula_depth)


def _trial_config(ns):
    return TrialConfig(seed=ns.seed, trials=ns.trials, atoms=ns.atoms,
                       max_bases=ns.max_bases, max_base_size=ns.max_base_size,
                       max_formula_depth=ns.max_depth)


def _script_lines(script: str):
    for line in script.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            yield line


def run_session(session: Session, script: str) -> str:
    out = []
    for line in _script_lines(script):
        out.append(f"> {line}\n")
        out.append(session.execute(line))
    return "".join(out)


def run_script(script: str, initial=frozenset(), *, auto_freshen=True,
               semantics="ours", base_dir=".") -> str:
    """Execute a command script and return its transcript."""
    session = Session(initial, auto_freshen=auto_freshen, semantics=semantics,
                      base_dir=base_dir)
    return run_session(session, script)


def scenario(name: str) -> str:
    try:
        script = SCENARIOS[name]
    except KeyError:
        raise CommandError(
            f"unknown scenario {name!r}; known: {', '.join(SCENARIOS)}") from None
    return run_script(script)


# ---------------------------------------------------------------------------
# Entry point


def _build_parser():
    parser = argparse.ArgumentParser(prog="flocks", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd", required=True)

    def session_options(p):
        p.add_argument("--flock", help="initial flock file")
        p.add_argument("--semantics", choices=["ours", "fukv"], default="ours")
        p.add_argument("--no-freshen", action="store_true",
                       help="reject expansion by formulas already in the flock")

    p = sub.add_parser("run", help="run a command script")
    p.add_argument("script")
    session_options(p)
    p = sub.add_parser("repl", help="interactive session")
    session_options(p)
    p = sub.add_parser("scenario", help="replay a built-in scenario")
    p.add_argument("name", choices=sorted(SCENARIOS))
    p = sub.add_parser("check", help="run a randomized check")
    p.add_argument("name", choices=sorted(harness.CHECKS))
    _add_trial_options(p)
    p = sub.add_parser("explore", help="search for a flock built by contract/expand")
    p.add_argument("target", help="flock file or inline bases like '{ p } { p & q }'")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--atoms", type=int, default=2)
    return parser


def _make_session(ns):
    initial = flock.load_flock(ns.flock) if ns.flock else frozenset()
    return Session(initial, auto_freshen=not ns.no_freshen, semantics=ns.semantics)


def _repl(session, stdin, stdout):
    interactive = stdin.isatty()
    while True:
        if interactive:
            stdout.write("flocks> ")
            stdout.flush()
        line = stdin.readline()
        if not line:
            break
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line in ("quit", "exit"):
            break
        if not interactive:
            stdout.write(f"> {line}\n")
        stdout.write(session.execute(line))


def main(argv=None) -> int:
    try:
        ns = _build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse reports usage errors with status 2, reserved for check failures
        return EXIT_IO if exc.code == 2 else exc.code
    try:
        if ns.cmd == "scenario":
            sys.stdout.write(scenario(ns.name))
            return EXIT_OK
        if ns.cmd == "check":
            report = harness.run_check(ns.name, _trial_config(ns))
            sys.stdout.write(report.render())
            return EXIT_OK if report.passed else EXIT_CHECK
        if ns.cmd == "explore":
            if os.path.exists(ns.target):
                target = flock.load_flock(ns.target)
            else:
                target = flock.parse_inline_flock(ns.target)
            result = harness.explore_constructibility(target, ns.depth, ns.atoms)
            sys.stdout.write(result.render())
            return EXIT_OK
        session = _make_session(ns)
        if ns.cmd == "run":
            with open(ns.script, encoding="utf-8") as fh:
                script = fh.read()
            session.base_dir = os.path.dirname(ns.script) or "."
            sys.stdout.write(run_session(session, script))
        else:
            _repl(session, sys.stdin, sys.stdout)
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO
    if session.check_failures:
        return EXIT_CHECK
    return EXIT_COMMAND if session.errors else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
