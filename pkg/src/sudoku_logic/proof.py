"""Hilbert-style proofs over Sudoku formulas.

Modus ponens is the only rule.  An axiom is any formula true in every full
Sudoku grid; since that set is defined semantically, the recognizer here is a
sound but incomplete whitelist on the 9x9 board, and exact on 4x4 in
exhaustive mode.  Steps are numbered from 1 throughout.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from functools import lru_cache

from .board import B2, B3, BoardParams, Cell, Grid, Prop, geometry, pos_of
from .formula import (
    And,
    Atom,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    atoms_of,
    eval_bits,
    flatten,
    map_atoms,
)
from .parser import ParseError, parse_formula, print_formula
from .semantics import Validity, _batch_eval, valid_in_all_full
from .solver import random_full_grid
from .transform import NormalForm, normal_form

TAUTOLOGY_ATOM_CAP = 20


class CapExceeded(Exception):
    """Too many distinct atoms for a truth-table check."""


class ProofError(ValueError):
    pass


# justifications and proofs -----------------------------------------------------

@dataclass(frozen=True)
class Justification:
    kind: str  # "axiom", "premise" or "mp"
    p: int | None = None
    q: int | None = None

    def __post_init__(self):
        if self.kind not in ("axiom", "premise", "mp"):
            raise ValueError(f"unknown justification {self.kind!r}")
        if (self.kind == "mp") != (self.p is not None and self.q is not None):
            raise ValueError("modus ponens needs exactly two step references")

    def __str__(self):
        return f"mp {self.p} {self.q}" if self.kind == "mp" else self.kind


AXIOM = Justification("axiom")
PREMISE = Justification("premise")


def mp(p: int, q: int) -> Justification:
    """From step ``p`` (phi) and step ``q`` (phi -> psi) infer psi."""
    return Justification("mp", p, q)


@dataclass(frozen=True)
class Step:
    formula: Formula
    just: Justification


@dataclass(frozen=True)
class Proof:
    steps: tuple[Step, ...]
    premises: frozenset = frozenset()
    params: BoardParams = B3

    @property
    def conclusion(self) -> Formula:
        return self.steps[-1].formula

    def __len__(self):
        return len(self.steps)

    def formulas(self) -> list[Formula]:
        return [s.formula for s in self.steps]


# tautologies -------------------------------------------------------------------

def truth_table_tautology(formula: Formula, cap: int = TAUTOLOGY_ATOM_CAP) -> bool:
    """True under every assignment to the distinct atoms, treated as letters."""
    atoms = sorted(atoms_of(formula))
    k = len(atoms)
    if k > cap:
        raise CapExceeded(f"{k} distinct atoms exceed the cap of {cap}")
    rows = 1 << k
    width = (1 << rows) - 1
    bits = {}
    for i, p in enumerate(atoms):
        # bit r of the column is the value of letter i in row r
        block = 1 << i
        pattern = ((1 << block) - 1) << block
        period = block * 2
        col = 0
        for start in range(0, rows, period):
            col |= pattern << start
        bits[p] = col & width
    return eval_bits(formula, bits.__getitem__, width) == width


def _hilbert_schema(f: Formula) -> str | None:
    """Structural instances of the propositional schemas the proof builders emit."""
    if type(f) is not Implies:
        return None
    a, b = f.left, f.right
    if a == b:
        return "identity"
    if type(b) is Implies:
        # x -> (y -> x)
        if b.right == a:
            return "weakening"
        # !x -> (x -> y)
        if type(a) is Not and b.left == a.arg:
            return "explosion"
        # x -> (y -> x & y)
        if type(b.right) is And and b.right.left == a and b.right.right == b.left:
            return "conjunction"
        # (x -> (y -> z)) -> ((x -> y) -> (x -> z))
        if type(a) is Implies and type(a.right) is Implies and type(b.left) is Implies and type(b.right) is Implies:
            x, y, z = a.left, a.right.left, a.right.right
            if b.left.left == x and b.left.right == y and b.right.left == x and b.right.right == z:
                return "distribution"
    return None


def is_tautology_instance(formula: Formula, cap: int = TAUTOLOGY_ATOM_CAP) -> bool:
    """Is ``formula`` a tautology with Sudoku formulas substituted for letters?

    Known schemas are matched structurally first, which works for any size of
    substituted formula; otherwise the atoms are taken as letters and a truth
    table decides, raising :class:`CapExceeded` beyond ``cap`` atoms.
    """
    if _hilbert_schema(formula):
        return True
    return truth_table_tautology(formula, cap)


# schema whitelist ----------------------------------------------------------------

def _as_prop(f: Formula) -> Prop | None:
    return f.prop if type(f) is Atom else None


def _as_approx(f: Formula) -> Prop | None:
    """``c ~ d`` written as ``!(c !~ d)``."""
    return f.arg.prop if type(f) is Not and type(f.arg) is Atom else None


def _as_equiv(f: Formula, params: BoardParams) -> tuple[Cell, int] | None:
    """``c == d``: a conjunction of ``c !~ e`` over exactly the digits e != d, any order."""
    parts = flatten(f, And)
    if len(parts) > params.side:
        return None
    props = set()
    for g in parts:
        p = _as_prop(g)
        if p is None or not _on_board(p, params):
            return None
        props.add(p)
    cells = {p.cell for p in props}
    if len(cells) != 1 or len(props) != params.side - 1:
        return None
    (d,) = set(params.digits) - {p.digit for p in props}
    return cells.pop(), d


def _in_board(cell: Cell, params: BoardParams) -> bool:
    return 1 <= cell.row <= params.side and 1 <= cell.col <= params.side


def _on_board(p: Prop, params: BoardParams) -> bool:
    return _in_board(p.cell, params) and 1 <= p.digit <= params.side


def _same_unit(u: Cell, v: Cell, params: BoardParams) -> bool:
    return u != v and pos_of(v, params) in geometry(params).peers[pos_of(u, params)]


def _full_assignment(f: Formula, params: BoardParams) -> tuple | None:
    """Cell values of ``epsilon``: a conjunction of ``c ~ d`` naming every cell once."""
    parts = flatten(f, And)
    if len(parts) != params.n_cells:
        return None
    values = [0] * params.n_cells
    for g in parts:
        p = _as_approx(g)
        if p is None or not _on_board(p, params):
            return None
        k = pos_of(p.cell, params)
        if values[k]:
            return None
        values[k] = p.digit
    return tuple(values)


def schema_name(f: Formula, params: BoardParams) -> str | None:
    """Name of the whitelisted Sudoku-axiom schema ``f`` instantiates, if any."""
    t = type(f)
    if t is Implies:
        # S1: u == d -> v !~ d for distinct cells in one unit
        e = _as_equiv(f.left, params)
        p = _as_prop(f.right)
        if e and p and _on_board(p, params) and _in_board(e[0], params):
            if p.digit == e[1] and _same_unit(e[0], p.cell, params):
                return "S1"
        return None
    if t is Iff:
        # S2: !(c !~ d) <-> c == d  (either side order)
        for a, b in ((f.left, f.right), (f.right, f.left)):
            p = _as_approx(a)
            e = _as_equiv(b, params)
            if p and e and _on_board(p, params) and (p.cell, p.digit) == e:
                return "S2"
        return None
    if t is Or:
        # S3: c ~ 1 | ... | c ~ n
        parts = flatten(f, Or)
        props = [_as_approx(g) for g in parts]
        if all(props) and len({p.cell for p in props}) == 1 and all(_on_board(p, params) for p in props):
            if {p.digit for p in props} == set(params.digits):
                return "S3"
        return None
    if t is Not and type(f.arg) is And:
        a, b = f.arg.left, f.arg.right
        p, q = _as_approx(a), _as_approx(b)
        if p and q and _on_board(p, params) and _on_board(q, params):
            # S4: !(c ~ d & c ~ e), d != e
            if p.cell == q.cell and p.digit != q.digit:
                return "S4"
            # S5: !(u ~ d & v ~ d) for distinct same-unit cells
            if p.digit == q.digit and _same_unit(p.cell, q.cell, params):
                return "S5"
            return None
        # S6: one conjunct of Uniq, !(eps_A & eps_B) for distinct full grids
        if type(a) is And and type(b) is And:
            va = _full_assignment(a, params)
            if va is not None:
                vb = _full_assignment(b, params)
                if vb is not None and va != vb:
                    return "S6"
    return None


# axiom verdicts -------------------------------------------------------------------

class AxiomKind(enum.Enum):
    IS_AXIOM = "axiom"
    NOT_AXIOM = "not an axiom"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class AxiomVerdict:
    kind: AxiomKind
    reason: str = ""  # "tautology", "schema S1", "exhaustive check", ...
    witness: Grid | None = None

    @property
    def ok(self) -> bool:
        return self.kind is AxiomKind.IS_AXIOM


def _recognize(f: Formula, params: BoardParams, cap: int, prefix_allowed: bool = True) -> str | None:
    name = schema_name(f, params)
    if name:
        return f"schema {name}"
    if _hilbert_schema(f):
        return "tautology"
    if type(f) is And:
        parts = flatten(f, And)
        reasons = set()
        for g in parts:
            r = _recognize(g, params, cap, prefix_allowed)
            if r is None:
                break
            reasons.add(r)
        else:
            return "conjunction of " + ", ".join(sorted(reasons))
    try:
        if truth_table_tautology(f, cap):
            return "tautology"
    except CapExceeded:
        pass
    if prefix_allowed and type(f) is Implies:
        r = _recognize(f.right, params, cap, False)
        if r:
            return f"weakened {r}"
    return None


@lru_cache(maxsize=16)
def _sample_grids(params: BoardParams, budget: int, seed: int) -> tuple[Grid, ...]:
    rng = random.Random(seed)
    return tuple(random_full_grid(params, rng) for _ in range(budget))


def is_axiom(formula: Formula, params: BoardParams, mode: str = "conservative", budget: int = 64, seed: int = 0,
             cap: int = TAUTOLOGY_ATOM_CAP) -> AxiomVerdict:
    """Classify ``formula`` as a Sudoku axiom.

    ``mode="exhaustive"`` on the 4x4 board checks all 288 full grids and is
    exact.  Otherwise the whitelist decides; unrecognised formulas are tested
    on ``budget`` seeded random full grids and come back ``NOT_AXIOM`` with a
    witness or ``UNKNOWN``.
    """
    if mode not in ("exhaustive", "conservative"):
        raise ValueError(f"unknown mode {mode!r}")
    for p in atoms_of(formula):
        if not _on_board(p, params):
            return AxiomVerdict(AxiomKind.NOT_AXIOM, f"{p} is outside the board")
    if mode == "exhaustive" and params.box_size == 2:
        res = valid_in_all_full(formula, params)
        if res.kind is Validity.VALID:
            return AxiomVerdict(AxiomKind.IS_AXIOM, "exhaustive check")
        return AxiomVerdict(AxiomKind.NOT_AXIOM, "falsified by a full grid", res.witness)
    reason = _recognize(formula, params, cap)
    if reason:
        return AxiomVerdict(AxiomKind.IS_AXIOM, reason)
    grids = _sample_grids(params, budget, seed)
    if grids:
        full = (1 << len(grids)) - 1
        truth = _batch_eval(formula, list(grids))
        if truth != full:
            miss = full & ~truth
            k = (miss & -miss).bit_length() - 1
            return AxiomVerdict(AxiomKind.NOT_AXIOM, "falsified by a sampled full grid", grids[k])
    return AxiomVerdict(AxiomKind.UNKNOWN, "not on the axiom whitelist and not falsified by sampling")


# verification ----------------------------------------------------------------------

@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    step: int | None = None
    reason: str = ""
    unknown: bool = False  # failed only because an axiom could not be decided

    def __bool__(self):
        return self.ok


def verify(proof: Proof, params: BoardParams | None = None, mode: str = "conservative", premises=None,
           budget: int = 64, seed: int = 0) -> VerifyResult:
    """Check every step of ``proof``; the first failing step is reported.

    ``premises`` overrides the proof's declared premise set.
    """
    params = params or proof.params
    premises = proof.premises if premises is None else frozenset(premises)
    if not proof.steps:
        return VerifyResult(False, None, "empty proof")
    axiom_cache: dict[Formula, AxiomVerdict] = {}
    for i, step in enumerate(proof.steps, 1):
        f, j = step.formula, step.just
        if j.kind == "premise":
            if f not in premises:
                return VerifyResult(False, i, "formula is not a declared premise")
        elif j.kind == "axiom":
            v = axiom_cache.get(f)
            if v is None:
                v = axiom_cache[f] = is_axiom(f, params, mode, budget, seed)
            if not v.ok:
                return VerifyResult(False, i, f"axiom check failed: {v.kind.value} ({v.reason})",
                                    v.kind is AxiomKind.UNKNOWN)
        else:
            if not (1 <= j.p < i and 1 <= j.q < i):
                return VerifyResult(False, i, f"modus ponens must cite earlier steps, got {j.p} and {j.q}")
            a = proof.steps[j.p - 1].formula
            imp = proof.steps[j.q - 1].formula
            if type(imp) is not Implies or imp.left != a or imp.right != f:
                return VerifyResult(False, i, f"step {j.q} is not step {j.p} -> this step")
    return VerifyResult(True)


# proof transformations ---------------------------------------------------------------

def deduction_transform(proof: Proof, alpha: Formula, check: bool = True, mode: str = "conservative") -> Proof:
    """Turn a proof of beta from Phi + {alpha} into a proof of alpha -> beta from Phi.

    Each step phi_i becomes a block ending in alpha -> phi_i: one step when
    phi_i is alpha, three otherwise.
    """
    if check:
        res = verify(proof, mode=mode, premises=proof.premises | {alpha})
        if not res:
            raise ProofError(f"input proof does not verify at step {res.step}: {res.reason}")
    out: list[Step] = []
    where: dict[int, int] = {}  # input step -> output step holding alpha -> phi
    for i, step in enumerate(proof.steps, 1):
        f, j = step.formula, step.just
        target = Implies(alpha, f)
        if f == alpha:
            out.append(Step(target, AXIOM))
        elif j.kind in ("axiom", "premise"):
            out.append(Step(f, j))
            out.append(Step(Implies(f, target), AXIOM))
            out.append(Step(target, mp(len(out) - 1, len(out))))
        else:
            fp = proof.steps[j.p - 1].formula
            dist = Implies(Implies(alpha, Implies(fp, f)), Implies(Implies(alpha, fp), target))
            out.append(Step(dist, AXIOM))
            out.append(Step(dist.right, mp(where[j.q], len(out))))
            out.append(Step(target, mp(where[j.p], len(out))))
        where[i] = len(out)
    return Proof(tuple(out), proof.premises - {alpha}, proof.params)


def undo_deduction(proof: Proof, alpha: Formula) -> Proof:
    """From a proof of alpha -> beta, a proof of beta with alpha as an extra premise."""
    concl = proof.conclusion
    if type(concl) is not Implies or concl.left != alpha:
        raise ProofError("the proof does not conclude alpha -> beta")
    n = len(proof.steps)
    steps = proof.steps + (Step(alpha, PREMISE), Step(concl.right, mp(n + 1, n)))
    return Proof(steps, proof.premises | {alpha}, proof.params)


def map_proof(transform, proof: Proof, check: bool = True, mode: str = "conservative") -> Proof:
    """Apply a Sudoku transformation to every formula; justifications are unchanged."""
    params = proof.params
    if check:
        res = verify(proof, mode=mode)
        if not res:
            raise ProofError(f"input proof does not verify at step {res.step}: {res.reason}")
    nf = transform if isinstance(transform, NormalForm) else normal_form(transform, params)
    memo: dict[Formula, Formula] = {}

    def move(f):
        g = memo.get(f)
        if g is None:
            g = memo[f] = map_atoms(f, nf.map_prop)
        return g

    steps = tuple(Step(move(s.formula), s.just) for s in proof.steps)
    return Proof(steps, frozenset(move(f) for f in proof.premises), params)


def inconsistency_expand(pos: Proof, neg: Proof, alpha: Formula, check: bool = True, mode: str = "conservative") -> Proof:
    """From proofs of beta and !beta, a proof of any alpha."""
    beta = pos.conclusion
    if neg.conclusion != Not(beta):
        raise ProofError("the second proof must conclude the negation of the first")
    if check:
        for pr in (pos, neg):
            res = verify(pr, mode=mode)
            if not res:
                raise ProofError(f"input proof does not verify at step {res.step}: {res.reason}")
    premises = pos.premises | neg.premises
    if alpha == beta:
        return Proof(pos.steps, premises, pos.params)
    n1 = len(pos.steps)
    steps = list(pos.steps)
    for s in neg.steps:
        j = s.just
        steps.append(Step(s.formula, mp(j.p + n1, j.q + n1) if j.kind == "mp" else j))
    n2 = len(steps)
    boom = Implies(Not(beta), Implies(beta, alpha))
    steps.append(Step(boom, AXIOM))
    steps.append(Step(boom.right, mp(n2, n2 + 1)))
    steps.append(Step(alpha, mp(n1, n2 + 2)))
    return Proof(tuple(steps), premises, pos.params)


# proof scripts ------------------------------------------------------------------------

def format_proof(proof: Proof) -> str:
    lines = [f"board: {proof.params.name}"]
    prem = sorted(print_formula(f) for f in proof.premises)
    lines.append("premises: " + ", ".join(prem))
    for i, s in enumerate(proof.steps, 1):
        lines.append(f"{i}. {print_formula(s.formula)} ; {s.just}")
    return "\n".join(lines) + "\n"


def parse_proof(text: str, params: BoardParams | None = None) -> Proof:
    """Read a proof script; ``#`` starts a comment."""
    board = None
    premises: list[Formula] = []
    steps: list[Step] = []
    pending_premises: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(":")
        key = head.strip().lower()
        if key == "board" and not steps:
            try:
                board = BoardParams.from_name(rest.strip())
            except ValueError as exc:
                raise ProofError(f"line {lineno}: {exc}") from None
            continue
        if key == "premises" and not steps:
            pending_premises.extend((lineno, p) for p in rest.split(",") if p.strip())
            continue
        num, dot, body = line.partition(".")
        if not dot or not num.strip().isdigit():
            raise ProofError(f"line {lineno}: expected '<n>. <formula> ; <justification>'")
        if int(num) != len(steps) + 1:
            raise ProofError(f"line {lineno}: step numbers must run 1..N, expected {len(steps) + 1}")
        ftext, semi, jtext = body.rpartition(";")
        if not semi:
            raise ProofError(f"line {lineno}: missing '; justification'")
        words = jtext.split()
        try:
            if words == ["axiom"]:
                just = AXIOM
            elif words == ["premise"]:
                just = PREMISE
            elif len(words) == 3 and words[0] == "mp":
                just = mp(int(words[1]), int(words[2]))
            else:
                raise ValueError
        except ValueError:
            raise ProofError(f"line {lineno}: bad justification {jtext.strip()!r}") from None
        steps.append(Step(_parse(ftext, board or params or B3, lineno), just))
    params = board or params or B3
    for lineno, ptxt in pending_premises:
        premises.append(_parse(ptxt, params, lineno))
    if not steps:
        raise ProofError("proof has no steps")
    return Proof(tuple(steps), frozenset(premises), params)


def _parse(text: str, params: BoardParams, lineno: int) -> Formula:
    try:
        return parse_formula(text, params)
    except ParseError as exc:
        raise ProofError(f"line {lineno}: {exc}") from None


# random proofs for the test harnesses ----------------------------------------------------

@dataclass
class ProofBuilder:
    """Accumulates steps and remembers where each formula was proved."""

    params: BoardParams
    premises: set = field(default_factory=set)
    steps: list = field(default_factory=list)
    index: dict = field(default_factory=dict)

    def add(self, f: Formula, just: Justification) -> int:
        if f in self.index:
            return self.index[f]
        self.steps.append(Step(f, just))
        self.index[f] = len(self.steps)
        return len(self.steps)

    def premise(self, f: Formula) -> int:
        self.premises.add(f)
        return self.add(f, PREMISE)

    def modus_ponens(self, a: Formula, imp: Formula) -> int:
        return self.add(imp.right, mp(self.index[a], self.index[imp]))

    def conjoin(self, a: Formula, b: Formula) -> Formula:
        """Derive a & b from proved a and b with the tautology a -> (b -> a & b)."""
        taut = Implies(a, Implies(b, And(a, b)))
        self.add(taut, AXIOM)
        self.modus_ponens(a, taut)
        self.modus_ponens(b, taut.right)
        return And(a, b)

    def build(self, conclusion: Formula | None = None) -> Proof:
        steps = list(self.steps)
        if conclusion is not None and steps[-1].formula != conclusion:
            k = self.index[conclusion]
            # restate the conclusion last via the identity c -> c
            ident = Implies(conclusion, conclusion)
            if ident not in self.index:
                steps.append(Step(ident, AXIOM))
                self.index[ident] = len(steps)
            steps.append(Step(conclusion, mp(k, self.index[ident])))
        return Proof(tuple(steps), frozenset(self.premises), self.params)


def random_proof(seed=None, params: BoardParams = B2, extra: int = 3) -> tuple[Proof, Grid]:
    """A random verified proof of an atomic conclusion from atomic premises.

    Premises are true in a random full grid S: every exclusion for a few
    "given" cells plus some random other exclusions.  The proof derives
    ``u == d`` for a given cell u by conjoining its premises, then excludes
    ``d`` from a peer with the unit schema.  Random tautologies and detours
    are mixed in.  Returns the proof and S, which models every step.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    n = params.side
    S = random_full_grid(params, rng)
    value = [m.bit_length() for m in S.cells]
    cells = [Cell(r, c) for r in range(1, n + 1) for c in range(1, n + 1)]
    true_props = [Prop(c, d) for c in cells for d in params.digits if d != value[pos_of(c, params)]]
    pb = ProofBuilder(params)
    for p in rng.sample(true_props, rng.randint(0, extra)):
        pb.premise(Atom(p))
    givens = rng.sample(cells, rng.randint(1, 2))
    derived: list[Formula] = []
    for u in givens:
        d = value[pos_of(u, params)]
        atoms = [Atom(Prop(u, s)) for s in params.digits if s != d]
        for a in atoms:
            pb.premise(a)
        acc = atoms[0]
        for a in atoms[1:]:
            acc = pb.conjoin(acc, a)
        peers = [cells[q] for q in sorted(geometry(params).peers[pos_of(u, params)])]
        for v in rng.sample(peers, rng.randint(1, 3)):
            rule = Implies(acc, Atom(Prop(v, d)))
            pb.add(rule, AXIOM)
            pb.modus_ponens(acc, rule)
            derived.append(rule.right)
    for _ in range(rng.randint(0, 2)):
        # detour through a weakening: x, x -> (y -> x), y -> x
        x = rng.choice(list(pb.index))
        y = Atom(rng.choice(true_props))
        w = Implies(x, Implies(y, x))
        pb.add(w, AXIOM)
        pb.modus_ponens(x, w)
    candidates = derived + [f for f in pb.premises]
    conclusion = rng.choice(candidates)
    return pb.build(conclusion), S
