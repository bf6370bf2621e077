"""define-syntax macros: unification pattern matching with `?`-variables.

A macro is an ordered list of (pattern, template) clauses.  Patterns are
plain list structure; a symbol starting with `?` matches any single value,
and a dotted tail variable `(p1 . ?rest)` matches the whole remainder of the
form.  Expansion is deliberately non-hygienic: templates are instantiated by
direct substitution, so macros can capture variables.
"""

from .errors import MacroError
from .values import NIL, Pair, SourcePair, Symbol, equal, intern
from .writer import write_value

DEFAULT_FUEL = 10_000

# Structural core forms a macro may not shadow.  `and`, `or`, and `cond`
# are intentionally absent: they are expressible as macros, so user
# definitions take precedence over the built-in forms.
RESERVED_NAMES = frozenset({
    "quote", "quasiquote", "unquote", "unquote-splicing",
    "if", "define", "define!", "set!", "lambda", "begin",
    "call/cc", "call-with-current-continuation", "choose", "define-syntax",
})

_S_QUOTE = intern("quote")
_S_QUASIQUOTE = intern("quasiquote")
_S_UNQUOTE = intern("unquote")
_S_UNQUOTE_SPLICING = intern("unquote-splicing")
_S_DEFINE_SYNTAX = intern("define-syntax")
_S_LAMBDA = intern("lambda")
_S_COND = intern("cond")

# Special forms whose first element is never expanded; every other element is.
_HEADED_FORMS = frozenset(
    intern(n) for n in ("if", "begin", "and", "or", "choose",
                        "call/cc", "call-with-current-continuation"))
_BINDING_FORMS = frozenset(intern(n) for n in ("define", "define!", "set!"))


class MacroClause:
    __slots__ = ("pattern", "template")

    def __init__(self, pattern, template):
        self.pattern = pattern
        self.template = template


class MacroTable:
    """Macro name -> clause list; clauses are tried in definition order."""

    __slots__ = ("bindings",)

    def __init__(self):
        self.bindings = {}

    def lookup(self, name):
        return self.bindings.get(name)


def is_pattern_variable(value):
    return isinstance(value, Symbol) and value.name.startswith("?")


def match_pattern(pattern, form):
    """Match `form` against `pattern`; returns a bindings dict or None."""
    bindings = {}
    if _match(pattern, form, bindings):
        return bindings
    return None


def _match(pattern, form, bindings):
    if isinstance(pattern, Symbol):
        if pattern.name.startswith("?"):
            bindings[pattern] = form
            return True
        return pattern is form
    if isinstance(pattern, Pair):
        if not isinstance(form, Pair):
            return False
        return (_match(pattern.car, form.car, bindings)
                and _match(pattern.cdr, form.cdr, bindings))
    if pattern is NIL:
        return form is NIL
    return equal(pattern, form)


def instantiate(template, bindings):
    """Substitute bound `?`-variables into `template`.

    A dotted tail variable splices naturally: cons'ing onto its bound list
    yields a proper list again.
    """
    if isinstance(template, Symbol):
        if template.name.startswith("?"):
            try:
                return bindings[template]
            except KeyError:
                raise MacroError(
                    f"unbound pattern variable {template.name} in template",
                    label="ExpansionError") from None
        return template
    if isinstance(template, Pair):
        return Pair(instantiate(template.car, bindings),
                    instantiate(template.cdr, bindings))
    if isinstance(template, list):
        return [instantiate(item, bindings) for item in template]
    return template


def define_macro(table, name, clauses):
    """Validate `clauses` and (re)bind `name` in `table`."""
    if not isinstance(name, Symbol):
        raise MacroError("macro name must be a symbol")
    if name.name in RESERVED_NAMES:
        raise MacroError(f"cannot redefine special form '{name.name}'")
    if not clauses:
        raise MacroError(f"define-syntax {name.name}: needs at least one clause")
    for clause in clauses:
        pattern, template = clause.pattern, clause.template
        if not isinstance(pattern, Pair):
            raise MacroError(
                f"define-syntax {name.name}: pattern must be a list, got "
                f"{write_value(pattern)}")
        if pattern.car is not name:
            raise MacroError(
                f"define-syntax {name.name}: pattern head is "
                f"{write_value(pattern.car)}")
        seen = set()
        for var in _pattern_variables(pattern):
            if var in seen:
                raise MacroError(
                    f"define-syntax {name.name}: duplicate pattern variable "
                    f"{var.name}")
            seen.add(var)
        for var in _pattern_variables(template):
            if var not in seen:
                raise MacroError(
                    f"define-syntax {name.name}: template variable {var.name} "
                    f"does not occur in its pattern")
    table.bindings[name] = list(clauses)
    return table


def _pattern_variables(value):
    stack = [value]
    while stack:
        node = stack.pop()
        if isinstance(node, Symbol):
            if node.name.startswith("?"):
                yield node
        elif isinstance(node, Pair):
            stack.append(node.car)
            stack.append(node.cdr)
        elif isinstance(node, list):
            stack.extend(node)


def parse_define_syntax(form):
    """Pick apart a (define-syntax name [pattern template] ...) datum."""
    if not isinstance(form, Pair) or form.car is not _S_DEFINE_SYNTAX:
        raise MacroError("not a define-syntax form")
    rest = form.cdr
    if not isinstance(rest, Pair) or not isinstance(rest.car, Symbol):
        raise MacroError("define-syntax: expected a macro name symbol")
    name = rest.car
    clauses = []
    node = rest.cdr
    while isinstance(node, Pair):
        clause = node.car
        if (not isinstance(clause, Pair)
                or not isinstance(clause.cdr, Pair)
                or clause.cdr.cdr is not NIL):
            raise MacroError(
                f"define-syntax {name.name}: each clause must be a "
                f"two-element [pattern template] list, got "
                f"{write_value(clause)}")
        clauses.append(MacroClause(clause.car, clause.cdr.car))
        node = node.cdr
    if node is not NIL:
        raise MacroError(f"define-syntax {name.name}: improper clause list")
    return name, clauses


def expand(form, table, fuel=DEFAULT_FUEL):
    """Fully expand `form`: head expansion to fixpoint, then subforms.

    `quote` bodies are untouched; inside `quasiquote` only `unquote` /
    `unquote-splicing` subexpressions are expanded.  `fuel` bounds the total
    number of head expansions so runaway macros fail fast.
    """
    cell = [fuel]
    return _expand(form, table, cell)


def _expand(form, table, cell):
    form = _expand_head(form, table, cell)
    if not isinstance(form, Pair):
        return form
    head = form.car
    if isinstance(head, Symbol):
        if head is _S_QUOTE or head is _S_DEFINE_SYNTAX:
            return form
        if head is _S_QUASIQUOTE:
            items, tail = _spine(form)
            new_items = list(items)
            for i in range(1, len(items)):
                new_items[i] = _expand_quasi(items[i], table, cell)
            if all(a is b for a, b in zip(new_items, items)):
                return form
            return _rebuild_spine(form, new_items, tail)
        if head is _S_LAMBDA:
            return _expand_elements(form, table, cell, skip=2)
        if head in _BINDING_FORMS:
            return _expand_elements(form, table, cell, skip=2)
        if head is _S_COND:
            return _expand_cond(form, table, cell)
        if head in _HEADED_FORMS:
            return _expand_elements(form, table, cell, skip=1)
    return _expand_elements(form, table, cell, skip=0)


def _expand_head(form, table, cell):
    while isinstance(form, Pair) and isinstance(form.car, Symbol):
        clauses = table.lookup(form.car)
        if clauses is None:
            return form
        for clause in clauses:
            bindings = match_pattern(clause.pattern, form)
            if bindings is not None:
                if cell[0] <= 0:
                    raise MacroError(
                        "macro expansion fuel exhausted (runaway macro?) at "
                        f"{write_value(form)}", label="ExpansionError")
                cell[0] -= 1
                form = instantiate(clause.template, bindings)
                break
        else:
            raise MacroError(
                f"no matching clause for {write_value(form)}",
                label="ExpansionError")
    return form


def _spine(form):
    items = []
    node = form
    while isinstance(node, Pair):
        items.append(node.car)
        node = node.cdr
    return items, node


def _expand_elements(form, table, cell, skip):
    items, tail = _spine(form)
    new_items = list(items)
    for i in range(skip, len(items)):
        new_items[i] = _expand(items[i], table, cell)
    if all(a is b for a, b in zip(new_items, items)):
        return form
    return _rebuild_spine(form, new_items, tail)


def _expand_cond(form, table, cell):
    items, tail = _spine(form)
    new_items = list(items)
    for i in range(1, len(items)):
        clause = items[i]
        if isinstance(clause, Pair):
            new_items[i] = _expand_elements(clause, table, cell, skip=0)
    if all(a is b for a, b in zip(new_items, items)):
        return form
    return _rebuild_spine(form, new_items, tail)


def _expand_quasi(template, table, cell):
    if isinstance(template, Pair):
        head = template.car
        if head is _S_QUASIQUOTE:
            # Nested quasiquote is rejected later by core-form validation.
            return template
        if head in (_S_UNQUOTE, _S_UNQUOTE_SPLICING):
            if (isinstance(template.cdr, Pair)
                    and template.cdr.cdr is NIL):
                expr = _expand(template.cdr.car, table, cell)
                if expr is template.cdr.car:
                    return template
                return _rebuild_spine(template, [head, expr], NIL)
            return template
        new_car = _expand_quasi(template.car, table, cell)
        new_cdr = _expand_quasi(template.cdr, table, cell)
        if new_car is template.car and new_cdr is template.cdr:
            return template
        return _copy_pair(template, new_car, new_cdr)
    if isinstance(template, list):
        new_items = [_expand_quasi(item, table, cell) for item in template]
        if all(a is b for a, b in zip(new_items, template)):
            return template
        return new_items
    return template


def _copy_pair(original, car, cdr):
    if isinstance(original, SourcePair):
        return SourcePair(car, cdr, original.loc)
    return Pair(car, cdr)


def _rebuild_spine(original, new_items, tail=NIL):
    """Rebuild a list with `new_items`, keeping source positions per pair."""
    originals = []
    node = original
    while isinstance(node, Pair):
        originals.append(node)
        node = node.cdr
    result = tail
    for i in range(len(new_items) - 1, -1, -1):
        template_pair = originals[i] if i < len(originals) else None
        if template_pair is not None:
            result = _copy_pair(template_pair, new_items[i], result)
        else:
            result = Pair(new_items[i], result)
    return result
