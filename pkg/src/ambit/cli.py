"""Interactive REPL, file runner, and one-shot expression evaluator.

Prompts go to stderr so piped stdout stays clean.  Results print with write
semantics, except top-level strings which display bare (matching how the
"no more choices" result reads at the REPL).  Exit codes: 0 success,
1 evaluation error, 2 usage error.
"""

import argparse
import sys

from .errors import LexError, ParseError, SchemeError
from .machine import Machine
from .reader import read_all
from .trace import render_traceback
from .values import VOID
from .writer import write_value

PROMPT = "==> "
CONT_PROMPT = "... "


class CliConfig:
    __slots__ = ("mode", "path", "expr", "stack_trace", "prompt")

    def __init__(self, mode, path=None, expr=None, stack_trace=True,
                 prompt=PROMPT):
        self.mode = mode
        self.path = path
        self.expr = expr
        self.stack_trace = stack_trace
        self.prompt = prompt


def parse_args(argv):
    parser = argparse.ArgumentParser(
        prog="ambit",
        description="Scheme interpreter with first-class continuations and "
                    "choose/require backtracking.")
    parser.add_argument("file", nargs="?", default=None,
                        help="Scheme source file to run")
    parser.add_argument("-e", "--eval", dest="expr", metavar="EXPR",
                        default=None, help="evaluate EXPR and print the result")
    parser.add_argument("--no-stack-trace", action="store_true",
                        help="start with stack tracing disabled")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {_version()}")
    ns = parser.parse_args(argv)
    if ns.expr is not None and ns.file is not None:
        parser.error("cannot combine -e with a file argument")
    if ns.expr is not None:
        mode = "eval-string"
    elif ns.file is not None:
        mode = "run-file"
    else:
        mode = "repl"
    return CliConfig(mode, path=ns.file, expr=ns.expr,
                     stack_trace=not ns.no_stack_trace)


def _version():
    from . import __version__

    return __version__


def _print_result(value, out):
    if value is VOID:
        return
    if type(value) is str:
        out.write(value + "\n")
    else:
        out.write(write_value(value) + "\n")
    out.flush()


def _report_error(err, machine, errout):
    frames = err.frames if err.frames is not None else ()
    errout.write(render_traceback(frames, err,
                                  machine.trace.config.max_frames) + "\n")
    errout.flush()


def repl_loop(machine, stdin=None, stdout=None, stderr=None, prompt=PROMPT):
    """Read balanced datums (multi-line aware), evaluate, print, repeat.

    Errors print a traceback and the loop continues; EOF ends the session.
    """
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    pending = ""
    while True:
        stderr.write(prompt if not pending else CONT_PROMPT)
        stderr.flush()
        line = stdin.readline()
        if line == "":
            if pending.strip():
                try:
                    read_all(pending)
                except SchemeError as err:
                    _report_error(err, machine, stderr)
            break
        pending += line
        if not pending.strip():
            pending = ""
            continue
        try:
            datums = read_all(pending)
        except (LexError, ParseError) as err:
            if err.unexpected_eof:
                continue
            _report_error(err, machine, stderr)
            pending = ""
            continue
        pending = ""
        for datum in datums:
            try:
                value = machine.eval_top(datum, "<stdin>")
            except SchemeError as err:
                _report_error(err, machine, stderr)
                break
            _print_result(value, stdout)
    return 0


def run_file(machine, path, stderr=None):
    stderr = stderr if stderr is not None else sys.stderr
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as err:
        stderr.write(f"ambit: cannot read {path}: {err.strerror}\n")
        return 1
    try:
        for datum in read_all(text):
            machine.eval_top(datum, path)
    except SchemeError as err:
        _report_error(err, machine, stderr)
        return 1
    return 0


def eval_string(machine, text, stdout=None, stderr=None):
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    try:
        for datum in read_all(text):
            _print_result(machine.eval_top(datum, "<string>"), stdout)
    except SchemeError as err:
        _report_error(err, machine, stderr)
        return 1
    return 0


def main(argv=None):
    config = parse_args(sys.argv[1:] if argv is None else argv)
    machine = Machine(stack_trace=config.stack_trace)
    if config.mode == "run-file":
        return run_file(machine, config.path)
    if config.mode == "eval-string":
        return eval_string(machine, config.expr)
    return repl_loop(machine, prompt=config.prompt)


if __name__ == "__main__":
    sys.exit(main())
