"""Core-form AST and validation.

Expanded datums are checked and compiled into small AST nodes before the
machine sees them, so evaluation never encounters a macro keyword or a
malformed special form.  `cond` is lowered into if/or/begin here; `and` and
`or` stay as dedicated nodes so they can deliver the deciding value without
introducing temporaries.
"""

from .errors import FormError
from .values import NIL, VOID, Pair, SourcePair, Symbol, intern
from .writer import write_value


class Literal:
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value


class VarRef:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name


class QuoteExpr:
    __slots__ = ("datum",)

    def __init__(self, datum):
        self.datum = datum


class IfExpr:
    __slots__ = ("test", "then", "alt")

    def __init__(self, test, then, alt):
        self.test = test
        self.then = then
        self.alt = alt


class DefineExpr:
    """`define` binds in the current frame; `define!` always targets the
    global frame."""

    __slots__ = ("name", "expr", "into_global")

    def __init__(self, name, expr, into_global=False):
        self.name = name
        self.expr = expr
        self.into_global = into_global


class SetExpr:
    __slots__ = ("name", "expr")

    def __init__(self, name, expr):
        self.name = name
        self.expr = expr


class LambdaExpr:
    __slots__ = ("params", "rest", "body")

    def __init__(self, params, rest, body):
        self.params = params
        self.rest = rest
        self.body = body


class BeginExpr:
    __slots__ = ("body",)

    def __init__(self, body):
        self.body = body


class AppExpr:
    __slots__ = ("op", "args", "op_name", "line", "col", "source")

    def __init__(self, op, args, op_name, line, col, source):
        self.op = op
        self.args = args
        self.op_name = op_name
        self.line = line
        self.col = col
        self.source = source


class AndExpr:
    __slots__ = ("exprs",)

    def __init__(self, exprs):
        self.exprs = exprs


class OrExpr:
    __slots__ = ("exprs",)

    def __init__(self, exprs):
        self.exprs = exprs


class CallccExpr:
    __slots__ = ("expr",)

    def __init__(self, expr):
        self.expr = expr


class ChooseExpr:
    __slots__ = ("exprs",)

    def __init__(self, exprs):
        self.exprs = exprs


class QuasiExpr:
    __slots__ = ("root",)

    def __init__(self, root):
        self.root = root


# Compiled quasiquote template nodes.
class QQConst:
    __slots__ = ("datum",)

    def __init__(self, datum):
        self.datum = datum


class QQUnquote:
    __slots__ = ("form",)

    def __init__(self, form):
        self.form = form


class QQSplice:
    __slots__ = ("form",)

    def __init__(self, form):
        self.form = form


class QQPair:
    __slots__ = ("car", "cdr")

    def __init__(self, car, cdr):
        self.car = car
        self.cdr = cdr


class QQVector:
    __slots__ = ("items",)

    def __init__(self, items):
        self.items = items


_S_QUOTE = intern("quote")
_S_QUASIQUOTE = intern("quasiquote")
_S_UNQUOTE = intern("unquote")
_S_UNQUOTE_SPLICING = intern("unquote-splicing")
_S_IF = intern("if")
_S_DEFINE = intern("define")
_S_DEFINE_BANG = intern("define!")
_S_SET_BANG = intern("set!")
_S_LAMBDA = intern("lambda")
_S_BEGIN = intern("begin")
_S_AND = intern("and")
_S_OR = intern("or")
_S_COND = intern("cond")
_S_ELSE = intern("else")
_S_CALLCC = intern("call/cc")
_S_CALLCC_LONG = intern("call-with-current-continuation")
_S_CHOOSE = intern("choose")
_S_DEFINE_SYNTAX = intern("define-syntax")


def _loc(form):
    if isinstance(form, SourcePair) and form.loc is not None:
        return form.loc
    return (None, None)


def _bad(form, message):
    line, col = _loc(form)
    return FormError(f"{message}: {write_value(form)}", line, col)


def _spine(form):
    items = []
    node = form
    while isinstance(node, Pair):
        items.append(node.car)
        node = node.cdr
    return items, node


def parse_core(form, source="<input>"):
    """Validate one expanded datum and compile it to a core form."""
    if isinstance(form, Symbol):
        return VarRef(form)
    if isinstance(form, Pair):
        return _parse_pair(form, source)
    if form is NIL:
        raise FormError("() is not a valid expression")
    # ints, floats, booleans, strings, and vector literals self-evaluate
    return Literal(form)


def _parse_pair(form, source):
    head = form.car
    items, tail = _spine(form)
    if tail is not NIL:
        raise _bad(form, "improper list is not a valid expression")
    if isinstance(head, Symbol):
        if head is _S_QUOTE:
            if len(items) != 2:
                raise _bad(form, "malformed quote")
            return QuoteExpr(items[1])
        if head is _S_QUASIQUOTE:
            if len(items) != 2:
                raise _bad(form, "malformed quasiquote")
            root, _ = _compile_qq(items[1], source)
            return QuasiExpr(root)
        if head is _S_UNQUOTE or head is _S_UNQUOTE_SPLICING:
            raise _bad(form, f"{head.name} outside quasiquote")
        if head is _S_IF:
            if len(items) not in (3, 4):
                raise _bad(form, "malformed if")
            alt = parse_core(items[3], source) if len(items) == 4 else None
            return IfExpr(parse_core(items[1], source),
                          parse_core(items[2], source), alt)
        if head is _S_DEFINE or head is _S_DEFINE_BANG:
            if len(items) != 3 or not isinstance(items[1], Symbol):
                raise _bad(form, f"malformed {head.name}")
            return DefineExpr(items[1], parse_core(items[2], source),
                              into_global=head is _S_DEFINE_BANG)
        if head is _S_SET_BANG:
            if len(items) != 3 or not isinstance(items[1], Symbol):
                raise _bad(form, "malformed set!")
            return SetExpr(items[1], parse_core(items[2], source))
        if head is _S_LAMBDA:
            if len(items) < 3:
                raise _bad(form, "malformed lambda")
            params, rest = _parse_params(form, items[1])
            body = tuple(parse_core(b, source) for b in items[2:])
            return LambdaExpr(params, rest, body)
        if head is _S_BEGIN:
            if len(items) == 1:
                return Literal(VOID)
            if len(items) == 2:
                return parse_core(items[1], source)
            return BeginExpr(tuple(parse_core(b, source) for b in items[1:]))
        if head is _S_AND:
            return AndExpr(tuple(parse_core(e, source) for e in items[1:]))
        if head is _S_OR:
            return OrExpr(tuple(parse_core(e, source) for e in items[1:]))
        if head is _S_COND:
            return _parse_cond(form, items[1:], source)
        if head is _S_CALLCC or head is _S_CALLCC_LONG:
            if len(items) != 2:
                raise _bad(form, f"malformed {head.name}")
            return CallccExpr(parse_core(items[1], source))
        if head is _S_CHOOSE:
            return ChooseExpr(tuple(parse_core(e, source) for e in items[1:]))
        if head is _S_DEFINE_SYNTAX:
            raise _bad(form, "define-syntax is only allowed at top level")
    op = parse_core(head, source)
    args = tuple(parse_core(a, source) for a in items[1:])
    op_name = op.name.name if type(op) is VarRef else None
    line, col = _loc(form)
    return AppExpr(op, args, op_name, line, col, source)


def _parse_params(form, params):
    if isinstance(params, Symbol):
        return (), params
    names = []
    rest = None
    node = params
    while isinstance(node, Pair):
        if not isinstance(node.car, Symbol):
            raise _bad(form, "lambda parameters must be symbols")
        names.append(node.car)
        node = node.cdr
    if node is not NIL:
        if not isinstance(node, Symbol):
            raise _bad(form, "malformed lambda parameter list")
        rest = node
    all_names = names + ([rest] if rest is not None else [])
    if len(set(all_names)) != len(all_names):
        raise _bad(form, "duplicate lambda parameter")
    return tuple(names), rest


def _parse_cond(form, clauses, source):
    result = Literal(VOID)
    for index in range(len(clauses) - 1, -1, -1):
        clause = clauses[index]
        items, tail = _spine(clause)
        if not isinstance(clause, Pair) or tail is not NIL or not items:
            raise _bad(form, "malformed cond clause")
        if items[0] is _S_ELSE:
            if index != len(clauses) - 1:
                raise _bad(form, "cond: else clause must be last")
            if len(items) < 2:
                raise _bad(form, "cond: empty else clause")
            result = _body_expr(tuple(parse_core(e, source) for e in items[1:]))
            continue
        test = parse_core(items[0], source)
        if len(items) == 1:
            # (test) keeps the test's value when it is truthy
            result = OrExpr((test, result))
        else:
            result = IfExpr(
                test, _body_expr(tuple(parse_core(e, source) for e in items[1:])),
                result)
    return result


def _body_expr(body):
    return body[0] if len(body) == 1 else BeginExpr(body)


def _compile_qq(template, source):
    """Compile a quasiquote template; returns (node, is_dynamic)."""
    if isinstance(template, Pair):
        head = template.car
        if head is _S_QUASIQUOTE:
            raise _bad(template, "nested quasiquote is not supported")
        if head is _S_UNQUOTE:
            if not (isinstance(template.cdr, Pair)
                    and template.cdr.cdr is NIL):
                raise _bad(template, "malformed unquote")
            return QQUnquote(parse_core(template.cdr.car, source)), True
        if head is _S_UNQUOTE_SPLICING:
            raise _bad(template, "unquote-splicing outside list context")
        car_t = template.car
        if (isinstance(car_t, Pair)
                and car_t.car is _S_UNQUOTE_SPLICING):
            if not (isinstance(car_t.cdr, Pair) and car_t.cdr.cdr is NIL):
                raise _bad(car_t, "malformed unquote-splicing")
            car_node = QQSplice(parse_core(car_t.cdr.car, source))
            car_dyn = True
        else:
            car_node, car_dyn = _compile_qq(car_t, source)
        cdr_node, cdr_dyn = _compile_qq(template.cdr, source)
        if not (car_dyn or cdr_dyn):
            return QQConst(template), False
        return QQPair(car_node, cdr_node), True
    if isinstance(template, list):
        node = QQConst(NIL)
        dynamic = False
        for item in reversed(template):
            if isinstance(item, Pair) and item.car is _S_UNQUOTE_SPLICING:
                if not (isinstance(item.cdr, Pair) and item.cdr.cdr is NIL):
                    raise _bad(item, "malformed unquote-splicing")
                node = QQPair(QQSplice(parse_core(item.cdr.car, source)), node)
                dynamic = True
            else:
                item_node, item_dyn = _compile_qq(item, source)
                node = QQPair(item_node, node)
                dynamic = dynamic or item_dyn
        if not dynamic:
            return QQConst(template), False
        return QQVector(node), True
    return QQConst(template), False
