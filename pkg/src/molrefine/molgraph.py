"""Molecular graph data model: SMILES parsing/writing, ring perception, isomorphism.

The graph is 2D connectivity only.  Stereochemistry markers (``/ \\ @``) and
isotope labels are accepted by the parser and discarded; aromaticity is taken
verbatim from lowercase SMILES atoms with no re-perception.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = [
    "Atom",
    "Bond",
    "MolecularGraph",
    "SmilesSyntaxError",
    "ValenceError",
    "UnsupportedFeatureError",
    "SizeLimitError",
    "parse_smiles",
    "write_smiles",
    "perceive_rings",
    "graph_isomorphic",
    "read_smiles_file",
]

SINGLE = 1
DOUBLE = 2
TRIPLE = 3
AROMATIC = 4

BOND_SYMBOLS = {"-": SINGLE, "=": DOUBLE, "#": TRIPLE, ":": AROMATIC}
SYMBOL_OF_ORDER = {SINGLE: "", DOUBLE: "=", TRIPLE: "#", AROMATIC: ":"}

# Organic subset plus bracket-only extras.  Valence lists are the allowed
# neutral valences used for implicit-hydrogen filling; the max entry bounds
# the valence check.
VALENCES: dict[str, tuple[int, ...]] = {
    "B": (3,),
    "C": (4,),
    "N": (3,),
    "O": (2,),
    "P": (3, 5),
    "S": (2, 4, 6),
    "F": (1,),
    "Cl": (1,),
    "Br": (1,),
    "I": (1,),
}

ORGANIC_SUBSET = {"B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"}
AROMATIC_ELEMENTS = {"B", "C", "N", "O", "P", "S"}

# Effective bond-order value of an aromatic bond when summing valence.
AROMATIC_ORDER_VALUE = 1.5


class SmilesSyntaxError(ValueError):
    """Malformed SMILES text (unbalanced parentheses, dangling ring digit, ...)."""


class ValenceError(ValueError):
    """An atom's bond-order sum plus hydrogens exceeds its allowed valence."""


class UnsupportedFeatureError(ValueError):
    """Grammar feature outside the supported subset (wildcards, dots, ...)."""


class SizeLimitError(ValueError):
    """Graph exceeds the size cap of an operation."""


@dataclass(frozen=True)
class Atom:
    element: str
    formal_charge: int = 0
    explicit_hydrogens: int = 0
    aromatic: bool = False

    def __post_init__(self) -> None:
        if self.element not in VALENCES:
            raise UnsupportedFeatureError(f"unsupported element {self.element!r}")
        if self.explicit_hydrogens < 0:
            raise ValueError("negative hydrogen count")


@dataclass(frozen=True)
class Bond:
    a: int
    b: int
    order: int = SINGLE

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise ValueError("bond endpoints must be distinct")
        if self.order not in (SINGLE, DOUBLE, TRIPLE, AROMATIC):
            raise ValueError(f"bad bond order {self.order}")

    @property
    def endpoints(self) -> tuple[int, int]:
        return (self.a, self.b) if self.a < self.b else (self.b, self.a)

    def other(self, idx: int) -> int:
        return self.b if idx == self.a else self.a


def _order_value(order: int) -> float:
    return AROMATIC_ORDER_VALUE if order == AROMATIC else float(order)


def max_allowed_valence(element: str, charge: int) -> int:
    """Maximum bond+H valence for an element at a formal charge.

    Neutral atoms use the element table.  Charges shift the bound using the
    usual lone-pair / electron-deficiency rules: N,O,P,S gain a bond per
    positive charge and lose one per negative; B does the opposite; C loses
    one either way; halogens follow the N,O pattern.
    """
    base = max(VALENCES[element])
    if charge == 0:
        return base
    if element in ("N", "O", "P", "S", "F", "Cl", "Br", "I"):
        return max(0, base + charge)
    if element == "B":
        return max(0, base - charge)
    if element == "C":
        return max(0, base - abs(charge))
    return base


@dataclass
class MolecularGraph:
    """Connected molecular graph.  ``rings`` is filled by ring perception."""

    atoms: list[Atom] = field(default_factory=list)
    bonds: list[Bond] = field(default_factory=list)
    rings: list[tuple[int, ...]] = field(default_factory=list)

    def __post_init__(self) -> None:
        self._adj: dict[int, list[Bond]] | None = None

    def neighbors(self, idx: int) -> list[tuple[int, Bond]]:
        """Neighbor atom indices with the connecting bond, in bond-list order."""
        if self._adj is None:
            adj: dict[int, list[Bond]] = {i: [] for i in range(len(self.atoms))}
            for bond in self.bonds:
                adj[bond.a].append(bond)
                adj[bond.b].append(bond)
            self._adj = adj
        return [(b.other(idx), b) for b in self._adj[idx]]

    def bond_between(self, a: int, b: int) -> Bond | None:
        for other, bond in self.neighbors(a):
            if other == b:
                return bond
        return None

    def degree(self, idx: int) -> int:
        return len(self.neighbors(idx))

    def bond_order_sum(self, idx: int) -> float:
        return sum(_order_value(b.order) for _, b in self.neighbors(idx))

    def valence(self, idx: int) -> int:
        """Bond-order sum (aromatic bonds at 1.5, floored) plus hydrogens."""
        atom = self.atoms[idx]
        return int(self.bond_order_sum(idx)) + atom.explicit_hydrogens

    def ring_membership(self) -> list[bool]:
        member = [False] * len(self.atoms)
        for ring in self.rings:
            for i in ring:
                member[i] = True
        return member

    def ring_bond_pairs(self) -> set[tuple[int, int]]:
        pairs: set[tuple[int, int]] = set()
        for ring in self.rings:
            n = len(ring)
            for k in range(n):
                a, b = ring[k], ring[(k + 1) % n]
                pairs.add((a, b) if a < b else (b, a))
        return pairs

    def is_connected(self) -> bool:
        if not self.atoms:
            return False
        seen = {0}
        stack = [0]
        while stack:
            cur = stack.pop()
            for nbr, _ in self.neighbors(cur):
                if nbr not in seen:
                    seen.add(nbr)
                    stack.append(nbr)
        return len(seen) == len(self.atoms)

    def validate(self) -> None:
        """Raise if connectivity or valence invariants are violated."""
        if not self.atoms:
            raise ValueError("empty graph")
        seen_pairs: set[tuple[int, int]] = set()
        for bond in self.bonds:
            if not (0 <= bond.a < len(self.atoms) and 0 <= bond.b < len(self.atoms)):
                raise ValueError("bond endpoint out of range")
            if bond.endpoints in seen_pairs:
                raise ValueError(f"duplicate bond {bond.endpoints}")
            seen_pairs.add(bond.endpoints)
        if not self.is_connected():
            raise ValueError("graph is disconnected")
        for idx, atom in enumerate(self.atoms):
            limit = max_allowed_valence(atom.element, atom.formal_charge)
            if self.valence(idx) > limit:
                raise ValenceError(
                    f"atom {idx} ({atom.element}, charge {atom.formal_charge}) "
                    f"valence {self.valence(idx)} exceeds {limit}"
                )


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def _implicit_hydrogens(element: str, aromatic: bool, order_sum: float) -> int:
    """Hydrogens to add to a bare organic-subset atom.

    Uses the smallest allowed valence that covers the (floored) bond-order
    sum.  Aromatic ring-junction atoms reach order sums like 4.5, which floor
    to the full valence and therefore get no hydrogens.
    """
    used = int(order_sum)
    for v in VALENCES[element]:
        if v >= used:
            return v - used
    raise ValenceError(
        f"bond order sum {order_sum} exceeds every allowed valence of {element}"
    )


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str) -> SmilesSyntaxError:
        return SmilesSyntaxError(f"{msg} at position {self.pos} in {self.text!r}")

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def parse(self) -> MolecularGraph:
        atoms: list[Atom] = []
        bonds: list[Bond] = []
        prev: int | None = None
        branch_stack: list[int | None] = []
        # ring number -> (atom index, pending bond order at opening)
        open_rings: dict[int, tuple[int, int | None]] = {}
        pending_order: int | None = None

        def add_atom(atom: Atom) -> None:
            nonlocal prev, pending_order
            atoms.append(atom)
            idx = len(atoms) - 1
            if prev is not None:
                order = pending_order
                if order is None:
                    order = AROMATIC if (atoms[prev].aromatic and atom.aromatic) else SINGLE
                bonds.append(Bond(prev, idx, order))
            prev = idx
            pending_order = None

        def close_ring(number: int) -> None:
            nonlocal pending_order
            if prev is None:
                raise self.error("ring-closure digit before any atom")
            if number in open_rings:
                start, open_order = open_rings.pop(number)
                order = pending_order if pending_order is not None else open_order
                if open_order is not None and pending_order is not None and open_order != pending_order:
                    raise self.error(f"conflicting bond orders on ring closure {number}")
                if order is None:
                    order = AROMATIC if (atoms[start].aromatic and atoms[prev].aromatic) else SINGLE
                if start == prev:
                    raise self.error(f"ring closure {number} to the same atom")
                bonds.append(Bond(start, prev, order))
                pending_order = None
            else:
                open_rings[number] = (prev, pending_order)
                pending_order = None

        while self.pos < len(self.text):
            ch = self.peek()
            if ch == "(":
                self.take()
                if prev is None:
                    raise self.error("branch before any atom")
                branch_stack.append(prev)
            elif ch == ")":
                self.take()
                if not branch_stack:
                    raise self.error("unmatched ')'")
                prev = branch_stack.pop()
            elif ch in BOND_SYMBOLS:
                self.take()
                if pending_order is not None:
                    raise self.error("two bond symbols in a row")
                pending_order = BOND_SYMBOLS[ch]
            elif ch in "/\\":
                # Stereo bond markers: treated as plain single bonds.
                self.take()
                pending_order = SINGLE
            elif ch.isdigit():
                self.take()
                close_ring(int(ch))
            elif ch == "%":
                self.take()
                digits = ""
                while self.peek().isdigit():
                    digits += self.take()
                if len(digits) < 2:
                    raise self.error("%% ring closure needs two digits")
                close_ring(int(digits))
            elif ch == "[":
                add_atom(self._bracket_atom())
            elif ch == ".":
                raise UnsupportedFeatureError("disconnected (dot-separated) SMILES are rejected")
            elif ch == "*":
                raise UnsupportedFeatureError("wildcard atoms are not supported")
            elif ch.isspace():
                raise self.error("whitespace inside SMILES")
            else:
                add_atom(self._organic_atom())

        if branch_stack:
            raise self.error("unmatched '('")
        if open_rings:
            raise self.error(f"unclosed ring digits {sorted(open_rings)}")
        if not atoms:
            raise self.error("no atoms")

        graph = MolecularGraph(atoms=atoms, bonds=bonds)
        self._fill_implicit_hydrogens(graph)
        graph.rings = perceive_rings(graph)
        graph.validate()
        return graph

    def _organic_atom(self) -> Atom:
        ch = self.take()
        if ch == "C" and self.peek() == "l":
            self.take()
            return Atom("Cl")
        if ch == "B" and self.peek() == "r":
            self.take()
            return Atom("Br")
        if ch in ORGANIC_SUBSET:
            return Atom(ch)
        if ch.islower():
            element = ch.upper()
            if element in AROMATIC_ELEMENTS:
                return Atom(element, aromatic=True)
        raise self.error(f"unexpected character {ch!r}")

    def _bracket_atom(self) -> Atom:
        assert self.take() == "["
        # Isotope label: parsed and discarded.
        while self.peek().isdigit():
            self.take()
        ch = self.take()
        if not ch:
            raise self.error("unterminated bracket atom")
        aromatic = False
        if ch.islower():
            aromatic = True
            element = ch.upper()
        else:
            element = ch
            if self.peek().islower() and element + self.peek() in VALENCES:
                element += self.take()
        if element == "H" or element == "*":
            raise UnsupportedFeatureError(f"bracket atom {element!r} not supported")
        if element not in VALENCES:
            raise UnsupportedFeatureError(f"unsupported element {element!r}")
        hydrogens = 0
        charge = 0
        while True:
            ch = self.peek()
            if ch == "@":
                self.take()  # chirality: ignored
            elif ch == "H":
                self.take()
                hydrogens = 1
                if self.peek().isdigit():
                    hydrogens = int(self.take())
            elif ch in "+-":
                sign = 1 if self.take() == "+" else -1
                if self.peek().isdigit():
                    charge = sign * int(self.take())
                else:
                    charge = sign
                    while self.peek() == ("+" if sign > 0 else "-"):
                        self.take()
                        charge += sign
            elif ch == "]":
                self.take()
                return Atom(element, formal_charge=charge, explicit_hydrogens=hydrogens,
                            aromatic=aromatic)
            elif ch == ":":
                self.take()  # atom-class label: digits ignored
                while self.peek().isdigit():
                    self.take()
            elif ch == "":
                raise self.error("unterminated bracket atom")
            else:
                raise self.error(f"unexpected {ch!r} in bracket atom")

    @staticmethod
    def _fill_implicit_hydrogens(graph: MolecularGraph) -> None:
        """Assign implicit hydrogens to bare (non-bracket) atoms.

        Bracket atoms carry explicit counts already; bare atoms were built
        with 0 and are revised here once all bonds are known.  Bare atoms are
        recognized by charge 0 and hydrogen count 0, which is safe because a
        bracket atom with neither charge nor hydrogens parses identically to
        the bare form.
        """
        revised: list[Atom] = []
        for idx, atom in enumerate(graph.atoms):
            if atom.formal_charge == 0 and atom.explicit_hydrogens == 0:
                h = _implicit_hydrogens(atom.element, atom.aromatic, graph.bond_order_sum(idx))
                atom = Atom(atom.element, 0, h, atom.aromatic)
            revised.append(atom)
        graph.atoms = revised


def parse_smiles(text: str) -> MolecularGraph:
    """Parse a SMILES string into a validated molecular graph.

    Raises SmilesSyntaxError, ValenceError, or UnsupportedFeatureError.
    """
    if not text:
        raise SmilesSyntaxError("empty SMILES string")
    if not text.isascii():
        raise SmilesSyntaxError("SMILES must be ASCII")
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Writing
# ---------------------------------------------------------------------------


def _atom_token(graph: MolecularGraph, idx: int) -> str:
    atom = graph.atoms[idx]
    symbol = atom.element.lower() if atom.aromatic else atom.element
    bare_ok = (
        atom.formal_charge == 0
        and atom.element in ORGANIC_SUBSET
        and (not atom.aromatic or atom.element in AROMATIC_ELEMENTS)
    )
    if bare_ok:
        implied = _implicit_hydrogens(atom.element, atom.aromatic, graph.bond_order_sum(idx))
        if implied == atom.explicit_hydrogens:
            return symbol
    h = ""
    if atom.explicit_hydrogens == 1:
        h = "H"
    elif atom.explicit_hydrogens > 1:
        h = f"H{atom.explicit_hydrogens}"
    c = ""
    if atom.formal_charge > 0:
        c = "+" if atom.formal_charge == 1 else f"+{atom.formal_charge}"
    elif atom.formal_charge < 0:
        c = "-" if atom.formal_charge == -1 else f"-{-atom.formal_charge}"
    return f"[{symbol}{h}{c}]"


def _bond_token(graph: MolecularGraph, bond: Bond) -> str:
    if bond.order == AROMATIC and graph.atoms[bond.a].aromatic and graph.atoms[bond.b].aromatic:
        return ""
    if bond.order == SINGLE and (graph.atoms[bond.a].aromatic and graph.atoms[bond.b].aromatic):
        return "-"  # explicit to avoid reading back as aromatic
    return SYMBOL_OF_ORDER[bond.order]


def write_smiles(graph: MolecularGraph, start: int = 0) -> str:
    """Serialize a graph to SMILES, deterministic for a fixed atom order.

    DFS from ``start``; neighbors visited in ascending atom index.  Round
    trips re-parse to an isomorphic graph.
    """
    n = len(graph.atoms)
    if n == 0:
        raise ValueError("empty graph")
    visited = [False] * n
    ring_digit_of: dict[tuple[int, int], int] = {}
    next_digit = [1]

    # First pass: find back edges (ring closures) via iterative DFS.
    parent: dict[int, int | None] = {start: None}
    order: list[int] = []
    stack = [start]
    seen = {start}
    while stack:
        cur = stack.pop()
        order.append(cur)
        for nbr, _ in sorted(graph.neighbors(cur), reverse=True):
            if nbr not in seen:
                seen.add(nbr)
                parent[nbr] = cur
                stack.append(nbr)
    if len(seen) != n:
        raise ValueError("graph is disconnected")

    tree_edges: set[tuple[int, int]] = set()
    for child, par in parent.items():
        if par is not None:
            tree_edges.add((min(child, par), max(child, par)))
    back_edges = [b for b in graph.bonds if b.endpoints not in tree_edges]

    closures: dict[int, list[tuple[int, Bond, int]]] = {i: [] for i in range(n)}
    for bond in back_edges:
        digit = next_digit[0]
        next_digit[0] += 1
        closures[bond.a].append((bond.b, bond, digit))
        closures[bond.b].append((bond.a, bond, digit))

    def ring_token(digit: int) -> str:
        return str(digit) if digit < 10 else f"%{digit:02d}"

    out: list[str] = []

    def emit(idx: int, via: Bond | None) -> None:
        if via is not None:
            out.append(_bond_token(graph, via))
        out.append(_atom_token(graph, idx))
        visited[idx] = True
        for _, bond, digit in sorted(closures[idx], key=lambda t: t[2]):
            key = bond.endpoints
            if key not in ring_digit_of:
                ring_digit_of[key] = digit
                out.append(_bond_token(graph, bond) + ring_token(digit))
            else:
                out.append(ring_token(ring_digit_of[key]))
        children = [
            (nbr, bond)
            for nbr, bond in sorted(graph.neighbors(idx))
            if not visited[nbr] and bond.endpoints in tree_edges
        ]
        for k, (nbr, bond) in enumerate(children):
            last = k == len(children) - 1
            if not last:
                out.append("(")
            emit(nbr, bond)
            if not last:
                out.append(")")

    emit(start, None)
    return "".join(out)


# ---------------------------------------------------------------------------
# Ring perception: minimum cycle basis (smallest set of smallest rings)
# ---------------------------------------------------------------------------


def _shortest_cycles_through(graph: MolecularGraph, root: int) -> list[tuple[int, ...]]:
    """Horton candidates: for each edge (u,v), cycle = sp(root,u) + (u,v) + sp(v,root)."""
    n = len(graph.atoms)
    dist = [None] * n
    par: list[int | None] = [None] * n
    dist[root] = 0
    queue = [root]
    while queue:
        nxt: list[int] = []
        for cur in queue:
            for nbr, _ in sorted(graph.neighbors(cur)):
                if dist[nbr] is None:
                    dist[nbr] = dist[cur] + 1
                    par[nbr] = cur
                    nxt.append(nbr)
        queue = nxt

    def path_to_root(v: int) -> list[int]:
        path = [v]
        while par[path[-1]] is not None:
            path.append(par[path[-1]])
        return path

    cycles = []
    for bond in graph.bonds:
        u, v = bond.a, bond.b
        pu, pv = path_to_root(u), path_to_root(v)
        if set(pu) & set(pv) != {root}:
            continue  # paths overlap away from root: not a simple candidate
        cycle = pu[::-1] + pv[:-1]
        if len(cycle) >= 3:
            cycles.append(tuple(cycle))
    return cycles


def _edge_vector(cycle: tuple[int, ...], edge_index: dict[tuple[int, int], int]) -> int:
    vec = 0
    n = len(cycle)
    for k in range(n):
        a, b = cycle[k], cycle[(k + 1) % n]
        vec |= 1 << edge_index[(a, b) if a < b else (b, a)]
    return vec


def perceive_rings(graph: MolecularGraph) -> list[tuple[int, ...]]:
    """Smallest set of smallest rings via Horton's minimum cycle basis.

    Candidate cycles from every BFS root are sorted by size and greedily
    selected under GF(2) edge-set independence until the cycle rank
    |E| - |V| + 1 is reached.
    """
    rank = len(graph.bonds) - len(graph.atoms) + 1
    if rank <= 0:
        return []
    edge_index = {b.endpoints: i for i, b in enumerate(graph.bonds)}
    candidates: dict[int, tuple[int, ...]] = {}
    for root in range(len(graph.atoms)):
        for cycle in _shortest_cycles_through(graph, root):
            vec = _edge_vector(cycle, edge_index)
            if vec not in candidates:
                candidates[vec] = cycle

    ordered = sorted(candidates.items(), key=lambda kv: (len(kv[1]), kv[1]))
    basis: list[int] = []  # row-reduced edge vectors
    rings: list[tuple[int, ...]] = []
    for vec, cycle in ordered:
        residue = vec
        for row in basis:
            residue = min(residue, residue ^ row)
        if residue:
            basis.append(residue)
            basis.sort(reverse=True)
            rings.append(cycle)
            if len(rings) == rank:
                break
    return rings


# ---------------------------------------------------------------------------
# Isomorphism
# ---------------------------------------------------------------------------

ISOMORPHISM_ATOM_CAP = 60


def _atom_label(atom: Atom) -> tuple[str, int]:
    return (atom.element, atom.formal_charge)


def graph_isomorphic(a: MolecularGraph, b: MolecularGraph) -> bool:
    """True iff an atom bijection preserves element, charge, and bond orders.

    Backtracking search with element/charge/degree pruning; graphs above
    60 atoms raise SizeLimitError.
    """
    mapping = find_isomorphism(a, b)
    return mapping is not None


def find_isomorphism(a: MolecularGraph, b: MolecularGraph) -> list[int] | None:
    """Return an atom mapping a->b if the graphs are isomorphic, else None."""
    na, nb = len(a.atoms), len(b.atoms)
    if na > ISOMORPHISM_ATOM_CAP or nb > ISOMORPHISM_ATOM_CAP:
        raise SizeLimitError(f"isomorphism capped at {ISOMORPHISM_ATOM_CAP} atoms")
    if na != nb or len(a.bonds) != len(b.bonds):
        return None

    def signature(g: MolecularGraph, i: int) -> tuple:
        orders = sorted(bond.order for _, bond in g.neighbors(i))
        return (_atom_label(g.atoms[i]), tuple(orders))

    if sorted(signature(a, i) for i in range(na)) != sorted(signature(b, i) for i in range(nb)):
        return None

    candidates = [
        [j for j in range(nb) if signature(b, j) == signature(a, i)] for i in range(na)
    ]
    # Assign most-constrained atoms first.
    order = sorted(range(na), key=lambda i: len(candidates[i]))
    mapping: list[int | None] = [None] * na
    used = [False] * nb

    def feasible(i: int, j: int) -> bool:
        for nbr, bond in a.neighbors(i):
            if mapping[nbr] is not None:
                other = b.bond_between(j, mapping[nbr])
                if other is None or other.order != bond.order:
                    return False
        return True

    def search(pos: int) -> bool:
        if pos == na:
            return True
        i = order[pos]
        for j in candidates[i]:
            if not used[j] and feasible(i, j):
                mapping[i] = j
                used[j] = True
                if search(pos + 1):
                    return True
                mapping[i] = None
                used[j] = False
        return False

    if search(0):
        return [int(m) for m in mapping]  # type: ignore[arg-type]
    return None


# ---------------------------------------------------------------------------
# Canonical form
# ---------------------------------------------------------------------------


def canonical_ranks(graph: MolecularGraph) -> list[int]:
    """Canonical atom ranks by iterative neighborhood refinement.

    Residual ties are broken by promoting one atom of the smallest tied
    class and re-refining, which is exact for the small fragment graphs
    this pipeline produces.
    """
    n = len(graph.atoms)
    inv: list[tuple] = [
        (
            graph.atoms[i].element,
            graph.atoms[i].formal_charge,
            graph.atoms[i].aromatic,
            graph.degree(i),
            tuple(sorted(bond.order for _, bond in graph.neighbors(i))),
        )
        for i in range(n)
    ]

    def refine(cur: list[tuple]) -> list[int]:
        ranks = _ranks_of(cur)
        while True:
            nxt = [
                (ranks[i], tuple(sorted((bond.order, ranks[nbr]) for nbr, bond in graph.neighbors(i))))
                for i in range(n)
            ]
            new_ranks = _ranks_of(nxt)
            if new_ranks == ranks:
                return ranks
            ranks = new_ranks

    ranks = refine(inv)
    while len(set(ranks)) < n:
        counts: dict[int, int] = {}
        for r in ranks:
            counts[r] = counts.get(r, 0) + 1
        tied = min(r for r, c in counts.items() if c > 1)
        chosen = min(i for i in range(n) if ranks[i] == tied)
        tagged = [(ranks[i], 0 if i == chosen else 1) for i in range(n)]
        ranks = refine(tagged)
    return ranks


def _ranks_of(invariants: list[tuple]) -> list[int]:
    ordered = sorted(set(invariants))
    index = {v: k for k, v in ordered and enumerate(ordered)}  # noqa: B905 - dict build
    return [index[v] for v in invariants]


def canonical_smiles(graph: MolecularGraph) -> str:
    """SMILES under canonical atom ordering: equal for isomorphic graphs."""
    ranks = canonical_ranks(graph)
    perm = sorted(range(len(graph.atoms)), key=lambda i: ranks[i])
    inverse = [0] * len(perm)
    for new_idx, old_idx in enumerate(perm):
        inverse[old_idx] = new_idx
    atoms = [graph.atoms[i] for i in perm]
    bonds = [Bond(inverse[b.a], inverse[b.b], b.order) for b in graph.bonds]
    bonds.sort(key=lambda b: (b.endpoints, b.order))
    relabeled = MolecularGraph(atoms=atoms, bonds=bonds)
    return write_smiles(relabeled, start=0)


# ---------------------------------------------------------------------------
# File I/O
# ---------------------------------------------------------------------------


def read_smiles_file(path: str) -> list[str]:
    """One SMILES per line; blank lines and '#' comments are skipped."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                out.append(line.split()[0])
    return out
