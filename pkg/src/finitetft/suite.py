"""The curated verification suite: bordisms, theories, composable pairs and the checks run on them."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence

from .cohomology.les import REGISTRY, les_of_pair
from .cohomology.oracle import DEFAULT_CAP, OracleTooLarge, brute_cohomology_oracle
from .exactalg.groups import FinAbGroup
from .simplicial.bordism import Bordism, closed_bordism, disjoint_union_bordism
from .simplicial.complex import SimComplex
from .simplicial.library import manifold_library
from .spectra import TheorySpec, verify_size_formula
from .tft import (
    bordism_map,
    brute_bordism_map,
    euler_tft,
    verify_euler_triviality_odd_d,
    verify_gluing,
)
from .exactalg.matrices import identity, kron, mat_eq

COEFFICIENTS = ("Z/2", "Z/3", "Z/4", "Z/2xZ/2")

TWO_SUMMAND = {
    1: [(0, "Z/2"), (0, "Z/3")],
    2: [(0, "Z/2"), (1, "Z/3")],
    3: [(1, "Z/2"), (2, "Z/3")],
}

# oriented bordisms of the suite, by dimension (names resolve through the library)
BORDISMS = {
    1: ["interval", "cylinder(point)", "cylinder(S0)", "S1"],
    2: ["disk", "disk_in", "cylinder(S1)", "pants", "copants", "handle", "S2", "T2", "Sigma(2)"],
    3: ["solid_torus", "solid_torus_in", "cylinder(T2grid)", "S3", "T3", "L(3,1)", "L(5,1)", "RP3", "S3split"],
}

# composable pairs (first, second) giving second ∘ first
GLUED_PAIRS = [
    ("interval", "interval"),
    ("interval", "cylinder(point)"),
    ("disk", "cylinder(S1)"),
    ("cylinder(S1)", "cylinder(S1)"),
    ("disk", "disk_in"),
    ("copants", "pants"),
    ("pants", "copants"),
    ("handle", "handle"),
    ("pants", "disk_in"),
    ("cylinder(S1)", "disk_in"),
    ("solid_torus", "solid_torus_in"),
    ("solid_torus", "cylinder(T2grid)"),
    ("cylinder(T2grid)", "cylinder(T2grid)"),
]

DISJOINT_PAIRS = [
    ("interval", "interval"),
    ("disk", "disk"),
    ("cylinder(S1)", "disk"),
    ("pants", "cylinder(S1)"),
    ("disk_in", "copants"),
    ("solid_torus", "S3"),
]

CYLINDER_OBJECTS = {1: ["point", "S0"], 2: ["S1", "S1(5)"], 3: ["S2", "T2", "T2grid", "RP2", "K", "Sigma(2)"]}


def theories(d: int) -> list[TheorySpec]:
    """Every ``Σ^p HA`` with ``0 <= p < d`` and ``A`` in the coefficient list, plus one two-summand theory."""
    out = [TheorySpec.single(d, p, A) for p in range(d) for A in COEFFICIENTS]
    out.append(TheorySpec(d, TWO_SUMMAND[d]))
    return out


def small_theories(d: int) -> list[TheorySpec]:
    """A lighter selection used for the exhaustive pairing checks."""
    return [TheorySpec.single(d, p, A) for p in range(d) for A in ("Z/2", "Z/3")] + [TheorySpec(d, TWO_SUMMAND[d])]


def bordism(name: str) -> Bordism:
    obj = manifold_library(name)
    return closed_bordism(obj) if isinstance(obj, SimComplex) else obj


def suite_bordisms(d: int | None = None) -> list[Bordism]:
    dims = [d] if d is not None else sorted(BORDISMS)
    return [bordism(n) for k in dims for n in BORDISMS[k]]


def glued_pairs() -> list[tuple[Bordism, Bordism]]:
    return [(bordism(a), bordism(b)) for a, b in GLUED_PAIRS]


def disjoint_pairs() -> list[tuple[Bordism, Bordism]]:
    return [(bordism(a), bordism(b)) for a, b in DISJOINT_PAIRS]


def parallel_map(fn: Callable, items: Sequence, jobs: int = 1) -> list:
    """Apply ``fn`` to every item, in order; ``jobs > 1`` uses a thread pool."""
    if jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# individual suites; each returns a list of JSON-ready dicts with a "status" field


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def run_duality(jobs: int = 1, dims: Iterable[int] = (1, 2, 3)) -> list[dict]:
    from .duality import verify_duality_square

    items = [(B, X) for d in dims for B in suite_bordisms(d) for X in theories(d)]

    def one(item):
        B, X = item
        r = verify_duality_square(B, X)
        obj = r.to_json_obj()
        if r.ok:
            obj.pop("lhs_matrix")
            obj.pop("rhs_matrix")
        return obj

    return parallel_map(one, items, jobs)


def run_closed_corollary(jobs: int = 1, dims: Iterable[int] = (1, 2, 3)) -> list[dict]:
    from .duality import closed_duality_corollary

    items = [(B, X) for d in dims for B in suite_bordisms(d) if B.is_closed() for X in theories(d)]

    def one(item):
        B, X = item
        out = closed_duality_corollary(B, X)
        out["status"] = _status(out.pop("ok"))
        return out

    return parallel_map(one, items, jobs)


def run_lambda(jobs: int = 1, dims: Iterable[int] = (1, 2, 3)) -> list[dict]:
    from .duality import audit_lambda

    items = [(B, X) for d in dims for B in suite_bordisms(d) for X in theories(d)]
    return parallel_map(lambda it: audit_lambda(*it).to_json_obj(), items, jobs)


def run_pairs(jobs: int = 1, dims: Iterable[int] = (2,)) -> list[dict]:
    """Exhaustive pairing lemmas on the bordisms with boundary."""
    from .duality import verify_pairing_lemmas

    items = [(B, X) for d in dims for B in suite_bordisms(d) for X in theories(d)]

    def one(item):
        B, X = item
        try:
            return verify_pairing_lemmas(B, X).to_json_obj()
        except ValueError as exc:
            return {"bordism": B.name, "theory": str(X), "status": "skipped", "reason": str(exc)}

    return parallel_map(one, items, jobs)


def _size_items() -> list[tuple[SimComplex, TheorySpec, SimComplex | None]]:
    items = []
    for d in (1, 2, 3):
        for B in suite_bordisms(d):
            for X in theories(d):
                items.append((B.M, X, None))
                if not B.is_closed():
                    items.append((B.M, X, B.boundary))
    return items


def run_sizes(jobs: int = 1) -> list[dict]:
    return parallel_map(lambda it: verify_size_formula(*it).to_json_obj(), _size_items(), jobs)


def run_gluing(jobs: int = 1) -> list[dict]:
    items = [(B1, B2, X) for B1, B2 in glued_pairs() for X in theories(B1.d)]
    return parallel_map(lambda it: verify_gluing(*it).to_json_obj(), items, jobs)


def run_cylinders(jobs: int = 1) -> list[dict]:
    items = [(bordism(f"cylinder({n})"), X) for d, names in CYLINDER_OBJECTS.items() for n in names for X in theories(d)]

    def one(item):
        B, X = item
        Z = bordism_map(B, X)
        ok = Z.shape[0] == Z.shape[1] and mat_eq(Z.matrix, identity(Z.shape[0]))
        return {"bordism": B.name, "theory": str(X), "dim": Z.shape[0], "status": _status(ok)}

    return parallel_map(one, items, jobs)


def run_disjoint(jobs: int = 1) -> list[dict]:
    items = [(B1, B2, X) for B1, B2 in disjoint_pairs() for X in theories(B1.d)]

    def one(item):
        B1, B2, X = item
        U = disjoint_union_bordism(B1, B2)
        ok = mat_eq(bordism_map(U, X).matrix, kron(bordism_map(B1, X).matrix, bordism_map(B2, X).matrix))
        return {"bordism": U.name, "theory": str(X), "status": _status(ok)}

    return parallel_map(one, items, jobs)


def run_euler(jobs: int = 1) -> list[dict]:
    """Odd-dimensional triviality of the Euler theory: ``α_N = λ^{χ(N)/2}`` intertwines it with 1."""
    from fractions import Fraction

    out = []
    rows = verify_euler_triviality_odd_d(suite_bordisms(1) + suite_bordisms(3))
    for row, B in zip(rows, suite_bordisms(1) + suite_bordisms(3)):
        lam = Fraction(1, 4)
        # α_{N'} = E(M) α_N with α_N = λ^{χ(N)/2}; squared to stay rational
        lhs = lam ** (B.chi_out)
        rhs = euler_tft(B, lam) ** 2 * lam ** (B.chi_in)
        row["alpha_square_ok"] = lhs == rhs
        row["status"] = _status(bool(row.pop("ok")) and row["alpha_square_ok"])
        out.append(row)
    K = manifold_library("K")
    e = Fraction(1, 3) ** K.euler_characteristic()
    out.append({"bordism": "K", "E_one_third": str(e), "status": _status(e == 1)})
    S2 = bordism("S2")
    out.append({"bordism": "S2", "E_two": str(euler_tft(S2, 2)), "status": _status(euler_tft(S2, 2) == 4)})
    return out


def oracle_instances() -> list[tuple[SimComplex, SimComplex | None, FinAbGroup, int]]:
    """Cohomology instances small enough for cochain enumeration (checked against the cap at run time)."""
    out = []
    closed = ["point", "S0", "S1", "S1(5)", "S2", "T2", "RP2", "K"]
    for name in closed:
        K = manifold_library(name)
        for A in ("Z/2", "Z/3", "Z/4", "Z/2xZ/2"):
            for k in range(K.dimension + 1):
                out.append((K, None, FinAbGroup.parse(A), k))
    for name in ("disk", "cylinder(S1)", "pants", "mobius"):
        B = manifold_library(name)
        for A in ("Z/2", "Z/3"):
            for k in range(B.M.dimension + 1):
                out.append((B.M, B.boundary, FinAbGroup.parse(A), k))
    return out


def run_oracle(cap: int = DEFAULT_CAP, jobs: int = 1) -> list[dict]:
    def one(item):
        K, L, A, k = item
        label = f"{K.name}{'' if L is None else ',∂'}"
        try:
            res = brute_cohomology_oracle(K, A, k, L, cap=cap)
        except OracleTooLarge as exc:
            return {"complex": label, "coeff": str(A), "degree": k, "status": "skipped", "reason": str(exc)}
        from .cohomology.groups import relative_cohomology

        H = relative_cohomology(K, L, A, k)
        ok = H.order == res.order
        # every class found by enumeration must have a distinct coordinate vector
        seen = set()
        for rep in res.representatives:
            seen.add(H.coords(rep))
        ok = ok and len(seen) == res.order
        return {"complex": label, "coeff": str(A), "degree": k, "order": H.order, "oracle": res.order, "status": _status(ok)}

    return parallel_map(one, oracle_instances(), jobs)


def run_bordism_oracle(cap: int = 10**4, jobs: int = 1) -> list[dict]:
    items = [(B, X) for d in (1, 2, 3) for B in suite_bordisms(d) for X in theories(d)]

    def one(item):
        B, X = item
        try:
            brute = brute_bordism_map(B, X, cap=cap)
        except ValueError as exc:
            return {"bordism": B.name, "theory": str(X), "status": "skipped", "reason": str(exc)}
        ok = bordism_map(B, X).equals(brute)
        return {"bordism": B.name, "theory": str(X), "status": _status(ok)}

    return parallel_map(one, items, jobs)


def run_les(jobs: int = 1) -> list[dict]:
    """Long exact sequences of every suite pair ``(M, ∂M)`` over each coefficient group."""
    items = [(B.M, B.boundary, FinAbGroup.parse(A), B.name) for d in (1, 2, 3) for B in suite_bordisms(d) if not B.is_closed() for A in COEFFICIENTS]

    def one(item):
        K, L, A, name = item
        seq = les_of_pair(K, L, A, f"LES({name},∂;{A})")
        return {"pair": name, "coeff": str(A), "orders": list(seq.record.orders), "status": _status(seq.record.ok)}

    return parallel_map(one, items, jobs)


def run_klein() -> list[dict]:
    from .duality import klein_counterexample

    r = klein_counterexample()
    return [{"name": "klein", "report": r, "status": _status(r["ok"])}]


def exact_sequence_law() -> dict:
    recs = REGISTRY.records()
    bad = [r.name for r in recs if not r.ok]
    return {"sequences": len(recs), "failures": bad, "status": _status(not bad)}


SUITES: dict[str, Callable[..., list[dict]]] = {
    "klein": lambda jobs=1, cap=DEFAULT_CAP: run_klein(),
    "sizes": lambda jobs=1, cap=DEFAULT_CAP: run_sizes(jobs),
    "cylinders": lambda jobs=1, cap=DEFAULT_CAP: run_cylinders(jobs),
    "gluing": lambda jobs=1, cap=DEFAULT_CAP: run_gluing(jobs),
    "disjoint": lambda jobs=1, cap=DEFAULT_CAP: run_disjoint(jobs),
    "euler": lambda jobs=1, cap=DEFAULT_CAP: run_euler(jobs),
    "duality": lambda jobs=1, cap=DEFAULT_CAP: run_duality(jobs),
    "closed": lambda jobs=1, cap=DEFAULT_CAP: run_closed_corollary(jobs),
    "lambda": lambda jobs=1, cap=DEFAULT_CAP: run_lambda(jobs),
    "pairs": lambda jobs=1, cap=DEFAULT_CAP: run_pairs(jobs),
    "oracle": lambda jobs=1, cap=DEFAULT_CAP: run_oracle(cap, jobs),
    "bordism-oracle": lambda jobs=1, cap=DEFAULT_CAP: run_bordism_oracle(10**4, jobs),
    "les": lambda jobs=1, cap=DEFAULT_CAP: run_les(jobs),
}

GROUPS = {
    "duality": ["duality", "closed", "klein"],
    "gluing": ["gluing", "cylinders", "disjoint"],
    "sizes": ["sizes"],
    "euler": ["euler"],
    "pairs": ["pairs", "lambda"],
    "oracle": ["oracle", "bordism-oracle"],
    "all": list(SUITES),
}


def run(suite: str = "all", jobs: int = 1, cap: int = DEFAULT_CAP) -> dict:
    """Run a named suite group; the result has one list per check plus the exact-sequence law."""
    if suite not in GROUPS:
        raise KeyError(f"unknown suite {suite!r}; choose from {sorted(GROUPS)}")
    out: dict = {}
    for name in GROUPS[suite]:
        out[name] = SUITES[name](jobs=jobs, cap=cap)
    out["exact_sequences"] = exact_sequence_law()
    out["ok"] = all(
        row.get("status") in ("pass", "skipped") for key, rows in out.items() if isinstance(rows, list) for row in rows
    ) and out["exact_sequences"]["status"] == "pass"
    return out
