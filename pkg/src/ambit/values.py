"""Runtime data model: symbols, pairs, closures, continuations, environments.

Scheme values map onto Python as follows: integers are int (kept within
signed 64-bit range by the arithmetic primitives), reals are float, booleans
are True/False, strings are str, vectors are Python lists.  Everything else
gets a dedicated class below.
"""

from .errors import EvalError

INT64_MIN = -(2 ** 63)
INT64_MAX = 2 ** 63 - 1


class Symbol:
    """Interned identifier; identity comparison is `eq?`."""

    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


_SYMBOLS = {}


def intern(name):
    sym = _SYMBOLS.get(name)
    if sym is None:
        # setdefault keeps interning single-winner under concurrent readers
        sym = _SYMBOLS.setdefault(name, Symbol(name))
    return sym


class Pair:
    """Mutable cons cell."""

    __slots__ = ("car", "cdr")

    def __init__(self, car, cdr):
        self.car = car
        self.cdr = cdr


class SourcePair(Pair):
    """Pair built by the reader; remembers where its datum started."""

    __slots__ = ("loc",)

    def __init__(self, car, cdr, loc=None):
        super().__init__(car, cdr)
        self.loc = loc


class _Unique:
    __slots__ = ("_label",)

    def __init__(self, label):
        self._label = label

    def __repr__(self):
        return self._label


NIL = _Unique("()")
VOID = _Unique("#<void>")
EOF_OBJECT = _Unique("#<eof>")

# Terminal element of the fail-continuation chain.
TERMINAL_FAIL = _Unique("#<terminal-fail>")


class Closure:
    """User procedure: parameters, body forms, and the defining environment.

    The environment is captured by reference, so later mutations of captured
    frames are visible to the closure.
    """

    __slots__ = ("params", "rest", "body", "env", "name")

    def __init__(self, params, rest, body, env, name=None):
        self.params = params
        self.rest = rest
        self.body = body
        self.env = env
        self.name = name


class Primitive:
    """Host-implemented procedure.

    Ordinary primitives are called as fn(machine, args) and their result is
    delivered to the current continuation.  Control primitives are called as
    fn(machine, args, k) and set the machine registers themselves.  `pure`
    marks primitives with no I/O or mutation; the machine may evaluate those
    inline in operand position.
    """

    __slots__ = ("name", "fn", "min_args", "max_args", "control", "pure")

    def __init__(self, name, fn, min_args, max_args, control=False,
                 pure=False):
        self.name = name
        self.fn = fn
        self.min_args = min_args
        self.max_args = max_args
        self.control = control
        self.pure = pure


class Cont:
    """A resume point plus its saved register values.

    Continuations are immutable, first-class, and may be applied any number
    of times.  `depth` records the trace-stack height at construction time;
    delivering a value to the continuation truncates the trace stack back to
    that height, which is what pops application frames.
    """

    __slots__ = ("label", "fields", "depth")

    def __init__(self, label, fields, depth):
        self.label = label
        self.fields = fields
        self.depth = depth


class ChoicePoint:
    """One pending `choose`: its untried alternatives plus everything needed
    to resume there (environment, continuation, trace spine, parent point).
    """

    __slots__ = ("alternatives", "env", "k", "parent", "trace")

    def __init__(self, alternatives, env, k, parent, trace):
        self.alternatives = alternatives
        self.env = env
        self.k = k
        self.parent = parent
        self.trace = trace


_MISSING = object()


class Environment(dict):
    """One frame of symbol->value bindings, chained to a parent frame.

    The frame IS the dict (symbol keys hash by identity thanks to
    interning); lookup searches innermost-out, `set` mutates the nearest
    binding, `define` binds in this frame.
    """

    __slots__ = ("parent",)

    # dict.__new__ already set up storage; skip dict.__init__ on purpose
    def __init__(self, parent=None):  # pylint: disable=super-init-not-called
        self.parent = parent

    def lookup(self, sym):
        env = self
        while env is not None:
            value = env.get(sym, _MISSING)
            if value is not _MISSING:
                return value
            env = env.parent
        raise EvalError("UnboundVariable", sym.name)

    def define(self, sym, value):
        self[sym] = value

    def set(self, sym, value):
        env = self
        while env is not None:
            if sym in env:
                env[sym] = value
                return
            env = env.parent
        raise EvalError("UnboundVariable", f"set!: {sym.name}")


def scheme_list(*items):
    return list_from(items)


def list_from(items):
    result = NIL
    for item in reversed(items):
        result = Pair(item, result)
    return result


def is_proper_list(value):
    while isinstance(value, Pair):
        value = value.cdr
    return value is NIL


def to_pylist(value, who="list"):
    """Proper list -> Python list; raises for improper lists."""
    out = []
    while isinstance(value, Pair):
        out.append(value.car)
        value = value.cdr
    if value is not NIL:
        raise EvalError(who, "expected a proper list")
    return out


def list_length(value):
    n = 0
    while isinstance(value, Pair):
        n += 1
        value = value.cdr
    return n if value is NIL else None


def is_truthy(value):
    return value is not False


def eqv(x, y):
    if x is y:
        return True
    tx = type(x)
    if tx is not type(y):
        return False
    if tx is int or tx is float:
        return x == y
    return False


# `eq?` on numbers is made deterministic by behaving like `eqv?`; on symbols
# interning already guarantees identity.
eq = eqv


def equal(x, y):
    while True:
        if x is y:
            return True
        if isinstance(x, Pair):
            if not isinstance(y, Pair) or not equal(x.car, y.car):
                return False
            x, y = x.cdr, y.cdr
            continue
        tx = type(x)
        if tx is not type(y):
            return False
        if tx is int or tx is float or tx is str:
            return x == y
        if tx is list:
            return len(x) == len(y) and all(equal(a, b) for a, b in zip(x, y))
        return False
