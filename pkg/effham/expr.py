"""
Real-valued expression graphs.

``Expr`` nodes are immutable and hash-consed: building the same structure twice
returns the same object, so a subexpression shared by many matrix entries is
stored once and evaluated once. Arithmetic operators fold constants and the
identities x±0, x*1, x*0, x/1 and -(-x) as nodes are built; ``Expr.node``
builds a node verbatim, which is what ``simplify`` and ``load_graph_json`` work
against.

Node kinds: const, param, add, sub, mul, div, neg, sqrt, abs.
"""

import json
import math
import numbers
import re
import threading
import weakref
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import DomainError, UnboundParameterError

ParamEnv = Mapping[str, float]

KINDS = ("const", "param", "add", "sub", "mul", "div", "neg", "sqrt", "abs")
BINARY = frozenset({"add", "sub", "mul", "div"})
UNARY = frozenset({"neg", "sqrt", "abs"})

# infix emission expands shared nodes; refuse trees that would not fit in memory
MAX_INFIX_TREE_SIZE = 2_000_000

_table: "weakref.WeakValueDictionary[tuple, Expr]" = weakref.WeakValueDictionary()
_table_lock = threading.Lock()


class Expr:
    """Handle to one node of a real-valued expression DAG."""

    __slots__ = ("kind", "children", "value", "name", "__weakref__")

    def __init__(self, *args, **kwargs):
        raise TypeError("use const(), param() or Expr.node() to build expressions")

    def __setattr__(self, key, value):
        raise AttributeError("Expr nodes are immutable")

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    def __reduce__(self):
        return (_intern, (self.kind, self.children, self.value, self.name))

    @staticmethod
    def node(kind: str, *children: "Expr") -> "Expr":
        """Build an operator node exactly as given, without any folding."""
        if kind in BINARY:
            arity = 2
        elif kind in UNARY:
            arity = 1
        else:
            raise ValueError(f"'{kind}' is not an operator kind")
        if len(children) != arity:
            raise ValueError(f"'{kind}' takes {arity} operand(s), got {len(children)}")
        return _intern(kind, tuple(_coerce(c) for c in children))

    @property
    def is_constant(self) -> bool:
        return self.kind == "const"

    # arithmetic -------------------------------------------------------------

    def __add__(self, other):
        other = _coerce_or_none(other)
        return NotImplemented if other is None else _fold("add", (self, other))

    def __radd__(self, other):
        other = _coerce_or_none(other)
        return NotImplemented if other is None else _fold("add", (other, self))

    def __sub__(self, other):
        other = _coerce_or_none(other)
        return NotImplemented if other is None else _fold("sub", (self, other))

    def __rsub__(self, other):
        other = _coerce_or_none(other)
        return NotImplemented if other is None else _fold("sub", (other, self))

    def __mul__(self, other):
        other = _coerce_or_none(other)
        return NotImplemented if other is None else _fold("mul", (self, other))

    def __rmul__(self, other):
        other = _coerce_or_none(other)
        return NotImplemented if other is None else _fold("mul", (other, self))

    def __truediv__(self, other):
        other = _coerce_or_none(other)
        return NotImplemented if other is None else _fold("div", (self, other))

    def __rtruediv__(self, other):
        other = _coerce_or_none(other)
        return NotImplemented if other is None else _fold("div", (other, self))

    def __neg__(self):
        return _fold("neg", (self,))

    def __pos__(self):
        return self

    def __abs__(self):
        return _fold("abs", (self,))

    def __pow__(self, exponent):
        if not isinstance(exponent, numbers.Integral):
            raise TypeError("only integer powers are supported")
        n = int(exponent)
        if n < 0:
            return ONE / (self ** -n)
        result: Optional[Expr] = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return ONE if result is None else result

    def sqrt(self) -> "Expr":
        return _fold("sqrt", (self,))

    def conjugate(self) -> "Expr":
        return self

    @property
    def real(self) -> "Expr":
        return self

    @property
    def imag(self) -> "Expr":
        return ZERO

    def __float__(self) -> float:
        if self.kind != "const":
            raise TypeError("only constant expressions convert to float; use evaluate()")
        return self.value

    def __repr__(self) -> str:
        if self.kind == "const":
            return f"Expr({_format_number(self.value)})"
        if self.kind == "param":
            return f"Expr({self.name})"
        if _tree_size(self) <= 200:
            return f"Expr({emit(self)})"
        return f"Expr(<{self.kind}, {node_count(self)} nodes>)"


Scalar = Union[complex, float, Expr]


def _intern(kind: str, children: Tuple[Expr, ...] = (), value: Optional[float] = None,
            name: Optional[str] = None) -> Expr:
    key = (kind, children, value, name)
    with _table_lock:
        node = _table.get(key)
        if node is None:
            node = object.__new__(Expr)
            object.__setattr__(node, "kind", kind)
            object.__setattr__(node, "children", children)
            object.__setattr__(node, "value", value)
            object.__setattr__(node, "name", name)
            _table[key] = node
    return node


def const(value: float) -> Expr:
    """Constant leaf."""
    value = float(value)
    if value == 0.0:
        value = 0.0  # merge -0.0 into +0.0
    return _intern("const", (), value, None)


def param(name: str) -> Expr:
    """Parameter leaf, bound at evaluation time."""
    if not name or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
        raise ValueError(f"invalid parameter name {name!r}")
    return _intern("param", (), None, name)


ZERO = const(0.0)
ONE = const(1.0)


def is_symbolic(x) -> bool:
    return isinstance(x, Expr)


def is_zero(x) -> bool:
    """Structural zero for Expr, exact zero for numbers."""
    if isinstance(x, Expr):
        return x.kind == "const" and x.value == 0.0
    return x == 0


def _coerce(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not expression operands")
    if isinstance(x, numbers.Real):
        return const(float(x))
    if isinstance(x, numbers.Complex):
        if x.imag != 0:
            raise TypeError("expressions are real-valued; got a complex operand")
        return const(float(x.real))
    raise TypeError(f"cannot use {type(x).__name__} as an expression operand")


def _coerce_or_none(x) -> Optional[Expr]:
    try:
        return _coerce(x)
    except TypeError:
        return None


def _is_const(e: Expr, value: float) -> bool:
    return e.kind == "const" and e.value == value


def _compute(kind: str, args: Sequence[float]) -> float:
    if kind == "add":
        return args[0] + args[1]
    if kind == "sub":
        return args[0] - args[1]
    if kind == "mul":
        return args[0] * args[1]
    if kind == "div":
        return args[0] / args[1]
    if kind == "neg":
        return -args[0]
    if kind == "sqrt":
        return math.sqrt(args[0])
    if kind == "abs":
        return abs(args[0])
    raise ValueError(f"unknown operator '{kind}'")


def _foldable(kind: str, args: Sequence[float]) -> bool:
    if kind == "div":
        return args[1] != 0.0
    if kind == "sqrt":
        return args[0] >= 0.0
    return True


def _fold(kind: str, children: Tuple[Expr, ...]) -> Expr:
    """Build ``kind(children)`` applying the local simplification rules."""
    if all(c.kind == "const" for c in children):
        args = [c.value for c in children]
        if _foldable(kind, args):
            return const(_compute(kind, args))
        return _intern(kind, children)

    a = children[0]
    if kind == "add":
        if _is_const(children[1], 0.0):
            return a
        if _is_const(a, 0.0):
            return children[1]
    elif kind == "sub":
        if _is_const(children[1], 0.0):
            return a
        if _is_const(a, 0.0):
            return _fold("neg", (children[1],))
    elif kind == "mul":
        b = children[1]
        if _is_const(a, 0.0) or _is_const(b, 0.0):
            return ZERO
        if _is_const(b, 1.0):
            return a
        if _is_const(a, 1.0):
            return b
    elif kind == "div":
        if _is_const(children[1], 1.0):
            return a
    elif kind == "neg":
        if a.kind == "neg":
            return a.children[0]
    return _intern(kind, children)


def sqrt(x: Scalar) -> Scalar:
    """Square root for either backend."""
    if isinstance(x, Expr):
        return x.sqrt()
    if isinstance(x, complex):
        return complex(math.sqrt(x.real)) if x.imag == 0 and x.real >= 0 else x ** 0.5
    return math.sqrt(x)


# traversal ------------------------------------------------------------------

def _postorder(roots: Union[Expr, Iterable[Expr]]) -> List[Expr]:
    """Distinct nodes reachable from ``roots``, children before parents."""
    if isinstance(roots, Expr):
        roots = (roots,)
    order: List[Expr] = []
    seen = set()
    stack: List[Tuple[Expr, bool]] = [(r, False) for r in reversed(list(roots))]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for child in reversed(node.children):
            if id(child) not in seen:
                stack.append((child, False))
    return order


def node_count(e: Expr) -> int:
    """Number of distinct DAG nodes reachable from ``e``."""
    return len(_postorder(e))


def parameters(e: Expr) -> List[str]:
    """Sorted names of the parameters ``e`` depends on."""
    return sorted({n.name for n in _postorder(e) if n.kind == "param"})


def _tree_size(e: Expr) -> int:
    size: Dict[int, int] = {}
    for n in _postorder(e):
        size[id(n)] = 1 + sum(size[id(c)] for c in n.children)
    return size[id(e)]


def _path_to(root: Expr, target: Expr) -> str:
    """Human-readable path from ``root`` down to ``target``."""
    stack: List[Tuple[Expr, List[str]]] = [(root, [root.kind])]
    visited = set()
    while stack:
        node, path = stack.pop()
        if node is target:
            return " -> ".join(path)
        if id(node) in visited:
            continue
        visited.add(id(node))
        for i, child in enumerate(node.children):
            stack.append((child, path + [f"[{i}] {child.kind}"]))
    return target.kind


# evaluation -----------------------------------------------------------------

def evaluate_many(roots: Sequence[Expr], env: ParamEnv, memo: Optional[Dict[int, float]] = None) -> List[float]:
    """Evaluate several graphs against one environment with a shared memo."""
    memo = {} if memo is None else memo
    for root in roots:
        for node in _postorder(root):
            key = id(node)
            if key in memo:
                continue
            kind = node.kind
            if kind == "const":
                memo[key] = node.value
                continue
            if kind == "param":
                try:
                    memo[key] = float(env[node.name])
                except KeyError:
                    raise UnboundParameterError(node.name) from None
                continue
            args = [memo[id(c)] for c in node.children]
            if kind == "div" and args[1] == 0.0:
                raise DomainError("division by zero", _path_to(root, node))
            if kind == "sqrt" and args[0] < 0.0:
                raise DomainError(f"square root of negative value {args[0]!r}", _path_to(root, node))
            memo[key] = _compute(kind, args)
    return [memo[id(r)] for r in roots]


def evaluate(e: Scalar, env: ParamEnv) -> float:
    """Numeric value of ``e`` under ``env``; numbers pass through unchanged."""
    if not isinstance(e, Expr):
        return e
    return evaluate_many([e], env)[0]


def simplify(e: Expr) -> Expr:
    """Rebuild ``e`` bottom-up through the folding rules."""
    rebuilt: Dict[int, Expr] = {}
    for node in _postorder(e):
        if not node.children:
            rebuilt[id(node)] = node
        else:
            rebuilt[id(node)] = _fold(node.kind, tuple(rebuilt[id(c)] for c in node.children))
    return rebuilt[id(e)]


# emission -------------------------------------------------------------------

_INFIX_OPS = {"add": "+", "sub": "-", "mul": "*", "div": "/"}


def _format_number(v: float) -> str:
    if math.isfinite(v) and v == int(v) and abs(v) < 1e16:
        text = str(int(v))
    else:
        text = repr(v)
    return f"(-{text[1:]})" if text.startswith("-") else text


def _infix(e: Expr) -> str:
    if _tree_size(e) > MAX_INFIX_TREE_SIZE:
        raise ValueError("expression tree too large for infix emission; use graph-json")
    text: Dict[int, str] = {}
    for n in _postorder(e):
        if n.kind == "const":
            s = _format_number(n.value)
        elif n.kind == "param":
            s = n.name
        elif n.kind in BINARY:
            s = f"({text[id(n.children[0])]} {_INFIX_OPS[n.kind]} {text[id(n.children[1])]})"
        elif n.kind == "neg":
            s = f"(-{text[id(n.children[0])]})"
        else:
            s = f"{n.kind}({text[id(n.children[0])]})"
        text[id(n)] = s
    return text[id(e)]


def _graph_payload(e: Expr, layers: Optional[Mapping[Expr, int]] = None) -> dict:
    order = _postorder(e)
    ids = {id(n): i for i, n in enumerate(order)}
    layer_of = {id(k): v for k, v in (layers or {}).items()}
    nodes = []
    for i, n in enumerate(order):
        entry = {"id": i, "kind": n.kind, "children": [ids[id(c)] for c in n.children]}
        if n.kind == "const":
            entry["value"] = n.value
        if n.kind == "param":
            entry["name"] = n.name
        if id(n) in layer_of:
            entry["layer"] = layer_of[id(n)]
        nodes.append(entry)
    return {"nodes": nodes, "root": ids[id(e)]}


def emit(e: Expr, format: str = "infix", layers: Optional[Mapping[Expr, int]] = None) -> str:
    """
    Render an expression as text.

    Args:
        e: Root node
        format: ``infix`` or ``graph-json``
        layers: Optional node to layer index map added to graph-json nodes

    Returns:
        The rendered text
    """
    if format == "infix":
        return _infix(e)
    if format == "graph-json":
        return json.dumps(_graph_payload(e, layers))
    raise ValueError(f"unknown emit format '{format}'")


def load_graph_json(text: str) -> Expr:
    """Rebuild the exact graph described by a graph-json document."""
    payload = json.loads(text)
    built: Dict[int, Expr] = {}
    for entry in payload["nodes"]:
        kind = entry["kind"]
        if kind == "const":
            node = const(entry["value"])
        elif kind == "param":
            node = param(entry["name"])
        else:
            node = Expr.node(kind, *(built[c] for c in entry["children"]))
        built[entry["id"]] = node
    return built[payload["root"]]


# infix parsing --------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/()]))"
)


def _tokenize(text: str) -> List[Tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ValueError(f"unexpected character at offset {pos}: {text[pos:pos + 10]!r}")
        kind = match.lastgroup
        tokens.append((kind, match.group(kind)))
        pos = match.end()
    return tokens


class _Parser:
    """Recursive-descent parser for the infix emission format."""

    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> Optional[Tuple[str, str]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, value: Optional[str] = None) -> Tuple[str, str]:
        token = self.peek()
        if token is None or (value is not None and token[1] != value):
            raise ValueError(f"expected {value or 'a token'} at token {self.pos}")
        self.pos += 1
        return token

    def parse(self) -> Expr:
        e = self.expression()
        if self.peek() is not None:
            raise ValueError(f"trailing input at token {self.pos}")
        return e

    def expression(self) -> Expr:
        e = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            e = Expr.node("add" if op == "+" else "sub", e, rhs)
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            e = Expr.node("mul" if op == "*" else "div", e, rhs)
        return e

    def unary(self) -> Expr:
        if self.peek() == ("op", "-"):
            self.take()
            operand = self.unary()
            if operand.kind == "const":
                return const(-operand.value)
            return Expr.node("neg", operand)
        return self.primary()

    def primary(self) -> Expr:
        kind, value = self.take()
        if kind == "num":
            return const(float(value))
        if kind == "name":
            if value in ("sqrt", "abs") and self.peek() == ("op", "("):
                self.take("(")
                inner = self.expression()
                self.take(")")
                return Expr.node(value, inner)
            return param(value)
        if value == "(":
            inner = self.expression()
            self.take(")")
            return inner
        raise ValueError(f"unexpected '{value}' at token {self.pos - 1}")


def parse_infix(text: str) -> Expr:
    """Parse the infix format produced by ``emit``."""
    return _Parser(text).parse()
