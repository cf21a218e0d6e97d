"""Finite-dimensional cyclic dGBV algebras: validation, built-in instances,
JSON ingestion, and Hodge-theoretic data (adjoint, Laplacian, spectrum).

A model packages a graded-commutative product, a degree +1 differential
d_bar, a degree -1 order-two operator del, a trace making <a,b> = Tr(ab)
nondegenerate, and a positive diagonal metric for adjoints.
"""

import itertools
import json
from fractions import Fraction

from .graded import Grading, GradedBasis, GradedVector, canonicalize_monomial
from .linalg import (
    inverse,
    is_zero_matrix,
    mat_add,
    mat_mul,
    mat_sub,
    rank,
    rational_eigendecomposition,
    zeros,
)
from .report import Report
from .scalars import rat


class ModelError(ValueError):
    pass


def _sparse_apply(op, vec: GradedVector) -> GradedVector:
    out = {}
    for i, c in vec.coords.items():
        for j, m in op.get(i, {}).items():
            s = out.get(j, 0) + c * m
            if s:
                out[j] = s
            else:
                out.pop(j, None)
    return GradedVector(vec.basis, out)


def _op_matrix(op, n):
    M = zeros(n, n)
    for src, col in op.items():
        for dst, c in col.items():
            M[dst][src] = Fraction(c)
    return M


class DGBVModel:
    """Immutable container; validate_dgbv() is the admission gate."""

    def __init__(self, name, basis, dim_x, unit_label, product, d_bar, del_, trace,
                 metric=None, modes=None, mode_bound=None):
        self.name = name
        self.basis = basis
        self.dim = len(basis)
        self.dim_x = dim_x
        self.unit = basis.index[unit_label]
        # product[(i, j)] -> {k: coeff}; stored for ordered pairs as given,
        # closed under graded commutativity at construction time.
        self.product = {}
        for (i, j), vec in product.items():
            self.product[(i, j)] = dict(vec)
        self.d_bar = {i: dict(col) for i, col in d_bar.items() if col}
        self.del_ = {i: dict(col) for i, col in del_.items() if col}
        self.trace = dict(trace)
        self.metric = list(metric) if metric is not None else [Fraction(1)] * self.dim
        # Fourier-type mode window: modes[i] is the integer mode of basis
        # element i; products truncate to zero outside |mode| <= mode_bound.
        self.modes = list(modes) if modes is not None else None
        self.mode_bound = mode_bound
        self._pairing = None
        self._pairing_inv = None
        self._hodge = None

    # -- algebra operations ------------------------------------------------

    def degree(self, i):
        return self.basis.degree(i)

    def weight(self, i):
        return self.basis.weight(i)

    def vector(self, coords) -> GradedVector:
        return GradedVector(self.basis, coords)

    def basis_vector(self, i) -> GradedVector:
        return GradedVector(self.basis, {i: Fraction(1)})

    def mul_basis(self, i, j) -> GradedVector:
        return GradedVector(self.basis, self.product.get((i, j), {}))

    def mul(self, a: GradedVector, b: GradedVector) -> GradedVector:
        out = {}
        for i, ca in a.coords.items():
            for j, cb in b.coords.items():
                for k, m in self.product.get((i, j), {}).items():
                    s = out.get(k, 0) + ca * cb * m
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        return GradedVector(self.basis, out)

    def apply_d_bar(self, v: GradedVector) -> GradedVector:
        return _sparse_apply(self.d_bar, v)

    def apply_del(self, v: GradedVector) -> GradedVector:
        return _sparse_apply(self.del_, v)

    def tr(self, v: GradedVector):
        return sum((c * self.trace.get(i, 0) for i, c in v.coords.items()), Fraction(0))

    def pairing_matrix(self):
        if self._pairing is None:
            P = zeros(self.dim, self.dim)
            for i in range(self.dim):
                for j in range(self.dim):
                    P[i][j] = self.tr(self.mul_basis(i, j))
            self._pairing = P
        return self._pairing

    def pairing_inverse(self):
        if self._pairing_inv is None:
            self._pairing_inv = inverse(self.pairing_matrix())
        return self._pairing_inv

    def dual_basis_vector(self, a) -> GradedVector:
        """e^a with Tr(e^a e_b) = delta_ab."""
        Pinv = self.pairing_inverse()
        # Tr(e^a e_b) = sum_c coeff_c P[c][b] = delta_ab -> coeffs = row a of P^-T
        return GradedVector(self.basis, {c: Pinv[a][c] for c in range(self.dim) if Pinv[a][c]})

    # -- window bookkeeping --------------------------------------------------

    @property
    def has_window(self):
        return self.modes is not None and self.mode_bound is not None

    def window_safe(self, indices) -> bool:
        """True when every sub-multiset of the factors' modes stays inside
        the window, so all product regroupings agree (vacuously true for
        models without a mode window)."""
        if not self.has_window:
            return True
        ms = [self.modes[i] for i in indices]
        sums = {0}
        for m in ms:
            sums |= {s + m for s in sums}
        return all(abs(s) <= self.mode_bound for s in sums)

    def trace_product(self, indices):
        """(Tr(e_{i1} ... e_{in}), boundary_flag) for factors in the order
        given; the product is folded left to right in the model algebra.

        The flag is the intrinsic window-safety bit, not a truncation event:
        it is set exactly when some sub-multiset of modes leaves the window.
        """
        flag = not self.window_safe(indices)
        if not indices:
            return Fraction(0), flag
        acc = self.basis_vector(indices[0])
        for i in indices[1:]:
            acc = self.mul(acc, self.basis_vector(i))
            if not acc:
                return Fraction(0), flag
        return self.tr(acc), flag

    def canonical_trace_product(self, indices):
        """Trace of the product after canonical sorting, with the Koszul sign
        of the sort applied. Returns (value, flag)."""
        factors = [(i, self.degree(i)) for i in indices]
        ordered, sign = canonicalize_monomial(factors)
        if sign == 0:
            return Fraction(0), not self.window_safe(indices)
        val, flag = self.trace_product([i for i, _ in ordered])
        return sign * val, flag

    # -- derived structure ---------------------------------------------------

    def bv_bracket(self, a: GradedVector, b: GradedVector) -> GradedVector:
        """{a,b} = del(ab) - (del a) b - (-1)^|a| a (del b); a, b homogeneous."""
        if not a or not b:
            return GradedVector(self.basis)
        da = a.homogeneous_degree()
        if da is None or b.homogeneous_degree() is None:
            raise ModelError("bv_bracket requires homogeneous inputs")
        sign = -1 if da % 2 else 1
        return (
            self.apply_del(self.mul(a, b))
            - self.mul(self.apply_del(a), b)
            - sign * self.mul(a, self.apply_del(b))
        )

    def d_bar_adjoint_matrix(self):
        """Adjoint of d_bar for the metric inner product <e_i, e_j> = g_i d_ij."""
        D = _op_matrix(self.d_bar, self.dim)
        G = self.metric
        n = self.dim
        A = zeros(n, n)
        for i in range(n):
            for j in range(n):
                if D[j][i]:
                    A[i][j] = D[j][i] * G[j] / G[i]
        return A

    def laplacian_matrix(self):
        D = _op_matrix(self.d_bar, self.dim)
        A = self.d_bar_adjoint_matrix()
        return mat_add(mat_mul(D, A), mat_mul(A, D))

    def hodge_data(self):
        if self._hodge is None:
            self._hodge = HodgeData(self)
        return self._hodge

    def canonical_dict(self):
        """Serializable canonical form (also the input to the model hash)."""
        out = {
            "name": self.name,
            "basis": [
                {"label": l, "degree": g.coh_degree, "hodge_weight": str(g.hodge_weight)}
                for l, g in zip(self.basis.labels, self.basis.gradings)
            ],
            "dim_x": self.dim_x,
            "unit": self.basis.labels[self.unit],
            "product": sorted(
                [self.basis.labels[i], self.basis.labels[j], self.basis.labels[k], str(c)]
                for (i, j), col in self.product.items()
                for k, c in col.items()
                if c
            ),
            "d_bar": sorted(
                [self.basis.labels[i], self.basis.labels[j], str(c)]
                for i, col in self.d_bar.items()
                for j, c in col.items()
            ),
            "del": sorted(
                [self.basis.labels[i], self.basis.labels[j], str(c)]
                for i, col in self.del_.items()
                for j, c in col.items()
            ),
            "trace": sorted(
                [self.basis.labels[i], str(c)] for i, c in self.trace.items() if c
            ),
            "metric": [[l, str(c)] for l, c in zip(self.basis.labels, self.metric)],
        }
        if self.has_window:
            out["window"] = {
                "bound": self.mode_bound,
                "modes": [[l, m] for l, m in zip(self.basis.labels, self.modes)],
            }
        return out


class HodgeData:
    """Adjoint, Laplacian and exact spectral decomposition of a model."""

    def __init__(self, model: DGBVModel):
        self.model = model
        self.d_bar_adjoint = model.d_bar_adjoint_matrix()
        self.laplacian = model.laplacian_matrix()
        self.spectrum = rational_eigendecomposition(self.laplacian)
        self.eigenvalues = [lam for lam, _ in self.spectrum]

    def harmonic_projector(self):
        for lam, P in self.spectrum:
            if lam == 0:
                return P
        return zeros(self.model.dim, self.model.dim)

    def harmonic_rank(self):
        return rank(self.harmonic_projector())

    def check(self) -> Report:
        rep = Report(f"hodge data on {self.model.name}")
        D = _op_matrix(self.model.d_bar, self.model.dim)
        L = self.laplacian
        rep.add("laplacian commutes with d_bar",
                is_zero_matrix(mat_sub(mat_mul(L, D), mat_mul(D, L))))
        rep.add("laplacian commutes with d_bar_adjoint",
                is_zero_matrix(mat_sub(mat_mul(L, self.d_bar_adjoint),
                                       mat_mul(self.d_bar_adjoint, L))))
        # harmonics ~ d_bar cohomology, by rank count
        n = self.model.dim
        coh = (n - rank(D)) - rank(D)
        rep.add("harmonics match d_bar cohomology",
                self.harmonic_rank() == coh,
                witness={"harmonic_rank": self.harmonic_rank(), "cohomology": coh})
        return rep


# -- validation --------------------------------------------------------------


def _witness(model, idxs):
    return {"elements": [model.basis.labels[i] for i in idxs]}


def validate_dgbv(model: DGBVModel) -> Report:
    """Run every structural identity; a model is admitted only if all pass.

    On windowed models, identities that regroup products (associativity,
    the order-two condition for del) are checked on window-safe tuples only,
    and the window data is reported.
    """
    rep = Report(f"validate {model.name}")
    n = model.dim
    u = model.unit

    ok = all(model.mul_basis(u, i) == model.basis_vector(i)
             and model.mul_basis(i, u) == model.basis_vector(i) for i in range(n))
    rep.add("unit element", ok)

    bad = None
    for i in range(n):
        for j in range(n):
            s = (-1) ** (model.degree(i) * model.degree(j))
            if model.mul_basis(i, j) != s * model.mul_basis(j, i):
                bad = (i, j)
                break
        if bad:
            break
    rep.add("product graded-commutative", bad is None,
            witness=_witness(model, bad) if bad else None)

    for i in range(n):
        for j in range(n):
            v = model.mul_basis(i, j)
            want = model.degree(i) + model.degree(j)
            if any(model.degree(k) != want for k in v.coords):
                rep.add("product degree 0", False, witness=_witness(model, (i, j)))
                break
        else:
            continue
        break
    else:
        rep.add("product degree 0", True)

    bad = None
    skipped = 0
    for i, j, k in itertools.product(range(n), repeat=3):
        if not model.window_safe((i, j, k)):
            skipped += 1
            continue
        lhs = model.mul(model.mul_basis(i, j), model.basis_vector(k))
        rhs = model.mul(model.basis_vector(i), model.mul_basis(j, k))
        if lhs != rhs:
            bad = (i, j, k)
            break
    note = f"window-safe triples only, {skipped} skipped" if skipped else None
    rep.add("product associative", bad is None,
            witness=_witness(model, bad) if bad else None, note=note)

    def nil(op, name):
        bad = next(
            (i for i in range(n) if _sparse_apply(op, _sparse_apply(op, model.basis_vector(i)))),
            None,
        )
        rep.add(name, bad is None, witness=_witness(model, (bad,)) if bad is not None else None)

    nil(model.d_bar, "d_bar squared zero")
    nil(model.del_, "del squared zero")

    bad = next(
        (i for i in range(n)
         if model.apply_d_bar(model.apply_del(model.basis_vector(i)))
         + model.apply_del(model.apply_d_bar(model.basis_vector(i)))),
        None,
    )
    rep.add("d_bar and del anticommute", bad is None,
            witness=_witness(model, (bad,)) if bad is not None else None)

    def op_degree(op, shift, name):
        ok = all(model.degree(j) == model.degree(i) + shift
                 for i, col in op.items() for j in col)
        rep.add(name, ok)

    op_degree(model.d_bar, +1, "d_bar degree +1")
    op_degree(model.del_, -1, "del degree -1")

    rep.add("unit closed", not model.apply_d_bar(model.basis_vector(u))
            and not model.apply_del(model.basis_vector(u)))

    bad = None
    for i, j in itertools.product(range(n), repeat=2):
        a, b = model.basis_vector(i), model.basis_vector(j)
        lhs = model.apply_d_bar(model.mul(a, b))
        rhs = model.mul(model.apply_d_bar(a), b) + \
            ((-1) ** model.degree(i)) * model.mul(a, model.apply_d_bar(b))
        if lhs != rhs:
            bad = (i, j)
            break
    rep.add("d_bar is a derivation", bad is None,
            witness=_witness(model, bad) if bad else None)

    # order-two condition: {a, -} is a derivation in its second slot
    bad = None
    skipped = 0
    for i, j, k in itertools.product(range(n), repeat=3):
        if not model.window_safe((i, j, k)):
            skipped += 1
            continue
        a, b, c = (model.basis_vector(t) for t in (i, j, k))
        da, db = model.degree(i), model.degree(j)
        lhs = model.bv_bracket(a, model.mul(b, c))
        rhs = model.mul(model.bv_bracket(a, b), c) + \
            ((-1) ** ((da - 1) * db)) * model.mul(b, model.bv_bracket(a, c))
        if lhs != rhs:
            bad = (i, j, k)
            break
    note = f"window-safe triples only, {skipped} skipped" if skipped else None
    rep.add("bracket Leibniz (del order two)", bad is None,
            witness=_witness(model, bad) if bad else None, note=note)

    bad = next((i for i in range(n) if model.tr(model.apply_d_bar(model.basis_vector(i)))), None)
    rep.add("trace kills d_bar image", bad is None,
            witness=_witness(model, (bad,)) if bad is not None else None)
    bad = next((i for i in range(n) if model.tr(model.apply_del(model.basis_vector(i)))), None)
    rep.add("trace kills del image", bad is None,
            witness=_witness(model, (bad,)) if bad is not None else None)

    P = model.pairing_matrix()
    bad = None
    for i in range(n):
        for j in range(n):
            if P[i][j] != (-1) ** (model.degree(i) * model.degree(j)) * P[j][i]:
                bad = (i, j)
                break
        if bad:
            break
    rep.add("pairing graded-symmetric", bad is None,
            witness=_witness(model, bad) if bad else None)
    rep.add("pairing nondegenerate", rank(P) == n)

    # <d_bar a, b> + (-1)^|a| <a, d_bar b> = 0 ; <del a, b> - (-1)^|a| <a, del b> = 0
    def adjointness(op, sign, name):
        bad = None
        for i, j in itertools.product(range(n), repeat=2):
            a, b = model.basis_vector(i), model.basis_vector(j)
            lhs = model.tr(model.mul(_sparse_apply(op, a), b))
            rhs = model.tr(model.mul(a, _sparse_apply(op, b)))
            if lhs + sign * ((-1) ** model.degree(i)) * rhs != 0:
                bad = (i, j)
                break
        rep.add(name, bad is None, witness=_witness(model, bad) if bad else None)

    adjointness(model.d_bar, +1, "d_bar skew self-adjoint")
    adjointness(model.del_, -1, "del self-adjoint")

    ok = all(isinstance(c, Fraction) and c > 0 for c in model.metric)
    rep.add("metric positive diagonal", ok)
    return rep


# -- built-in instances -------------------------------------------------------


def builtin_elliptic_cohomology() -> DGBVModel:
    """Harmonic 4-dimensional model: basis 1, th, et, thet with th, et odd,
    zero differentials, Tr(th*et) = 1."""
    basis = GradedBasis([
        ("1", Grading(0, Fraction(-1))),
        ("th", Grading(1, Fraction(0))),
        ("et", Grading(1, Fraction(-1))),
        ("thet", Grading(2, Fraction(0))),
    ])
    I, TH, ET, THET = range(4)
    product = {}

    def setp(i, j, k, c):
        product.setdefault((i, j), {})[k] = Fraction(c)

    for x in range(4):
        setp(I, x, x, 1)
        if x != I:
            setp(x, I, x, 1)
    setp(TH, ET, THET, 1)
    setp(ET, TH, THET, -1)
    return DGBVModel(
        name="elliptic-cohomology",
        basis=basis,
        dim_x=1,
        unit_label="1",
        product=product,
        d_bar={},
        del_={},
        trace={THET: Fraction(1)},
    )


def builtin_fourier_torus(M: int) -> DGBVModel:
    """Fourier-truncated one-dimensional model with nonzero differentials.

    Basis f_m, f_m th, f_m et, f_m thet for |m| <= M; products add modes and
    truncate to zero outside the window; d_bar(f_m) = m f_m et extended as a
    derivation; del is divergence along th. Laplacian spectrum {m^2}.
    """
    if M < 1:
        raise ModelError("fourier-torus needs M >= 1")
    sectors = [("", 0, Fraction(-1), 0, 0), ("x", 1, Fraction(0), 1, 0),
               ("y", 1, Fraction(-1), 0, 1), ("xy", 2, Fraction(0), 1, 1)]
    labels = []
    meta = {}
    modes = []
    for suffix, deg, wt, nx, ny in sectors:
        for m in range(-M, M + 1):
            label = f"f{m}{suffix}"
            meta[label] = (m, nx, ny)
            labels.append((label, Grading(deg, wt)))
            modes.append(m)
    basis = GradedBasis(labels)
    idx = basis.index

    def wedge(nx1, ny1, nx2, ny2):
        """Sign and output sector of (x^nx1 y^ny1)(x^nx2 y^ny2)."""
        if nx1 + nx2 > 1 or ny1 + ny2 > 1:
            return 0, 0, 0
        # reorder y x -> x y costs one swap
        sign = -1 if (ny1 == 1 and nx2 == 1) else 1
        return sign, nx1 + nx2, ny1 + ny2

    def sector_label(m, nx, ny):
        return f"f{m}{'x' * nx}{'y' * ny}"

    product = {}
    for l1, (m1, nx1, ny1) in meta.items():
        for l2, (m2, nx2, ny2) in meta.items():
            sign, nx, ny = wedge(nx1, ny1, nx2, ny2)
            if sign == 0 or abs(m1 + m2) > M:
                continue
            product[(idx[l1], idx[l2])] = {idx[sector_label(m1 + m2, nx, ny)]: Fraction(sign)}

    d_bar = {}
    del_ = {}
    for l, (m, nx, ny) in meta.items():
        if m == 0:
            continue
        if ny == 0:  # d_bar = m * (left mult by et), zero on et-carrying sectors
            sign = -1 if nx == 1 else 1  # et past th
            d_bar[idx[l]] = {idx[sector_label(m, nx, 1)]: Fraction(sign * m)}
        if nx == 1:  # del strips th with coefficient m
            del_[idx[l]] = {idx[sector_label(m, 0, ny)]: Fraction(m)}
    trace = {idx["f0xy"]: Fraction(1)}
    return DGBVModel(
        name=f"fourier-torus({M})",
        basis=basis,
        dim_x=1,
        unit_label="f0",
        product=product,
        d_bar=d_bar,
        del_=del_,
        trace=trace,
        modes=modes,
        mode_bound=M,
    )


_BUILTINS = {
    "elliptic-cohomology": builtin_elliptic_cohomology,
}


def get_model(name_or_path: str) -> DGBVModel:
    """Resolve a built-in name ('elliptic-cohomology', 'fourier-torus:M') or
    load a model-spec JSON file. Validation always runs."""
    if name_or_path in _BUILTINS:
        model = _BUILTINS[name_or_path]()
    elif name_or_path.startswith("fourier-torus:"):
        model = builtin_fourier_torus(int(name_or_path.split(":", 1)[1]))
    else:
        with open(name_or_path, "r", encoding="utf-8") as fh:
            return load_model(fh.read())
    rep = validate_dgbv(model)
    if not rep.passed:
        raise ModelError(f"builtin model failed validation:\n{rep.render()}")
    return model


def load_model(config_text: str) -> DGBVModel:
    """Parse and validate a model-spec JSON document.

    Schema errors raise ModelError naming the offending path; validator
    failures raise ModelError carrying the report.
    """
    try:
        doc = json.loads(config_text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ModelError("config root must be an object")

    def need(field, typ):
        if field not in doc:
            raise ModelError(f"schema error at field {field!r}: missing")
        if not isinstance(doc[field], typ):
            raise ModelError(f"schema error at field {field!r}: wrong type")
        return doc[field]

    raw_basis = need("basis", list)
    elements = []
    for k, entry in enumerate(raw_basis):
        if not isinstance(entry, dict) or "label" not in entry or "degree" not in entry:
            raise ModelError(f"schema error at basis[{k}]: need label and degree")
        wt = rat(entry.get("hodge_weight", 0))
        elements.append((entry["label"], Grading(int(entry["degree"]), wt)))
    basis = GradedBasis(elements)
    idx = basis.index
    dim_x = need("dim_x", int)
    unit = need("unit", str)
    if unit not in idx:
        raise ModelError("schema error at field 'unit': unknown label")

    def lookup(label, where):
        if label not in idx:
            raise ModelError(f"schema error at {where}: unknown label {label!r}")
        return idx[label]

    product = {}
    for k, quad in enumerate(need("product", list)):
        if not isinstance(quad, list) or len(quad) != 4:
            raise ModelError(f"schema error at product[{k}]: need [a,b,c,coeff]")
        a, b, c, coeff = quad
        product.setdefault(
            (lookup(a, f"product[{k}]"), lookup(b, f"product[{k}]")), {}
        )[lookup(c, f"product[{k}]")] = rat(coeff)

    def load_op(field):
        op = {}
        rows = need(field, list) if field in doc else []
        for k, triple in enumerate(rows):
            if not isinstance(triple, list) or len(triple) != 3:
                raise ModelError(f"schema error at {field}[{k}]: need [from,to,coeff]")
            src, dst, coeff = triple
            op.setdefault(lookup(src, f"{field}[{k}]"), {})[lookup(dst, f"{field}[{k}]")] = rat(coeff)
        return op

    d_bar = load_op("d_bar")
    del_ = load_op("del")

    trace = {}
    for k, pair in enumerate(need("trace", list)):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ModelError(f"schema error at trace[{k}]: need [label,coeff]")
        trace[lookup(pair[0], f"trace[{k}]")] = rat(pair[1])

    metric = [Fraction(1)] * len(basis)
    if "metric" in doc:
        for k, pair in enumerate(need("metric", list)):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ModelError(f"schema error at metric[{k}]: need [label,coeff]")
            c = rat(pair[1])
            if c <= 0:
                raise ModelError(f"schema error at metric[{k}]: must be positive")
            metric[lookup(pair[0], f"metric[{k}]")] = c

    modes = None
    bound = None
    if "window" in doc:
        win = need("window", dict)
        bound = int(win["bound"])
        modes = [0] * len(basis)
        for pair in win.get("modes", []):
            modes[lookup(pair[0], "window.modes")] = int(pair[1])

    model = DGBVModel(
        name=doc.get("name", "user-model"),
        basis=basis,
        dim_x=dim_x,
        unit_label=unit,
        product=product,
        d_bar=d_bar,
        del_=del_,
        trace=trace,
        metric=metric,
        modes=modes,
        mode_bound=bound,
    )
    rep = validate_dgbv(model)
    if not rep.passed:
        raise ModelError("model rejected by validator:\n" + rep.render())
    return model


def dump_model(model: DGBVModel) -> str:
    return json.dumps(model.canonical_dict(), indent=2, sort_keys=True)
