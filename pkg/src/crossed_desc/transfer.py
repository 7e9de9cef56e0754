"""Transfer of descent data along diagram morphisms.

Besides the direct image map, this module implements the constructive lifting
of descent data and of gauge transformations along a weak equivalence, and the
two-route bijection verification: an enumeration/counting route and the
constructive route must agree, and a disagreement is raised as a hard error.

Every existential choice in the lifting algorithms is resolved by
least-identifier search, so lifts are deterministic and their traces
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cosimplicial import CrossedDiagram, DiagramMorphism
from .crossed import is_weak_equivalence_crossed
from .descent import (
    ClassTable,
    DescentDatum,
    GaugeTransformation,
    PartialDescentDatum,
    complete_descent,
    gauge_classes,
    gauge_compose,
    gauge_invert,
    is_descent_datum,
    is_gauge,
    vertex_object,
    _push1,
    _push2,
)
from .groupoid import Word, evaluate_word, pi0_groupoid
from .validation import (
    CrossedDescError,
    DomainError,
    LiftSearchError,
    ValidationReport,
)


@dataclass
class LiftTrace:
    """All intermediates of one lifting run, re-validatable after the fact."""

    kind: str  # "surjectivity" or "injectivity"
    data: dict[str, object] = field(default_factory=dict)

    def as_json(self) -> dict:
        out = {"kind": self.kind}
        for k, v in self.data.items():
            if isinstance(v, DescentDatum):
                out[k] = {"x": v.x, "g": v.g, "a": v.a}
            elif isinstance(v, GaugeTransformation):
                out[k] = {"f": v.f, "c": v.c}
            else:
                out[k] = v
        return out


def apply_morphism(F: DiagramMorphism, t: DescentDatum) -> DescentDatum:
    """The image triple (F(x), F(g), F(a)); always a descent datum."""
    ok, _ = is_descent_datum(F.source, t)
    if not ok:
        raise DomainError("input triple is not a descent datum in the source")
    image = DescentDatum(
        F.levels[0].apply_obj(t.x),
        F.levels[1].apply_mor1(t.g),
        F.levels[2].apply_mor2(t.a),
    )
    ok, report = is_descent_datum(F.target, image)
    if not ok:
        raise CrossedDescError(
            f"image of a descent datum fails the descent checks: {report.violations}"
        )
    return image


def apply_morphism_gauge(F: DiagramMorphism, t: GaugeTransformation) -> GaugeTransformation:
    return GaugeTransformation(F.levels[0].apply_mor1(t.f), F.levels[1].apply_mor2(t.c))


def is_weak_equivalence_diagram(F: DiagramMorphism) -> tuple[bool, ValidationReport]:
    """Levelwise weak-equivalence check; the report names the failing level."""
    report = ValidationReport()
    for p in range(4):
        ok, level_report = is_weak_equivalence_crossed(F.levels[p])
        if not ok:
            report.extend(level_report, prefix=f"level {p}: ")
            return False, report
    return True, report


# -- lifting descent data (surjectivity chase) --------------------------


def lift_descent(
    F: DiagramMorphism, target: DescentDatum
) -> tuple[DescentDatum, GaugeTransformation, LiftTrace]:
    """Lift a target descent datum along a weak equivalence.

    Returns (lifted source datum, gauge transformation in the target from
    `target` to the image of the lift, trace).  The caller is responsible for
    F being a weak equivalence; search exhaustion raises LiftSearchError and
    indicates that it is not, or that the data is corrupt.
    """
    G, H = F.source, F.target
    ok, _ = is_descent_datum(H, target)
    if not ok:
        raise DomainError("target triple is not a descent datum")
    y, h, b = target.x, target.g, target.a
    H0, H1 = H.levels[0], H.levels[1]
    trace = LiftTrace("surjectivity", {"target": target})

    # 1. an object of the source hitting the component of y, and a connecting
    #    1-morphism f : y -> F(x)
    labels = pi0_groupoid(H0.g1)
    x = f = None
    for cand in sorted(G.levels[0].objects):
        image = F.levels[0].apply_obj(cand)
        if labels[image] == labels[y]:
            homset = H0.g1.hom(y, image)
            if homset:
                x, f = cand, homset[0]
                break
    if x is None:
        raise LiftSearchError("component-surjectivity", f"no source object hits the component of {y}")
    y_prime = F.levels[0].apply_obj(x)
    trace.data.update({"x": x, "f": f, "y_prime": y_prime})

    # 2. transport the datum to y' with the trivial 2-component, then complete
    f0 = _push1(H, f, (0,), 1)
    f1 = _push1(H, f, (1,), 1)
    h_pp = evaluate_word(H1.g1, Word.of((f1, +1), (h, +1), (f0, -1)))
    c_pp = H1.g2.identity(vertex_object(H, y, 0, 1))
    b_pp, dd_pp = complete_descent(
        H, target, PartialDescentDatum(y_prime, h_pp), GaugeTransformation(f, c_pp)
    )
    trace.data.update({"h_pp": h_pp, "c_pp": c_pp, "b_pp": b_pp})

    # 3. a source 1-morphism g and a correction c' with h'' = F(g) . D(c')
    x0, x1 = vertex_object(G, x, 0, 1), vertex_object(G, x, 1, 1)
    yp0 = vertex_object(H, y_prime, 0, 1)
    g = c_p = None
    for g_cand in G.levels[1].g1.hom(x0, x1):
        h_p_cand = F.levels[1].apply_mor1(g_cand)
        for c_cand in sorted(H1.g2.group(yp0).elements):
            if h_pp == H1.g1.compose(h_p_cand, H1.feedback(c_cand)):
                g, c_p = g_cand, c_cand
                break
        if g is not None:
            break
    if g is None:
        raise LiftSearchError("hom-quotient-surjectivity", "no (g, c') with h'' = F(g) . D(c')")
    h_p = F.levels[1].apply_mor1(g)
    b_p, dd_p = complete_descent(
        H,
        dd_pp,
        PartialDescentDatum(y_prime, h_p),
        GaugeTransformation(H0.g1.identity(y_prime), H1.g2.inv(c_p)),
    )
    trace.data.update({"g": g, "c_p": c_p, "h_p": h_p, "b_p": b_p})

    # 4. the unique source 2-cell with the prescribed feedback and image
    G2 = G.levels[2]
    g01 = _push1(G, g, (0, 1), 2)
    g02 = _push1(G, g, (0, 2), 2)
    g12 = _push1(G, g, (1, 2), 2)
    want_feedback = evaluate_word(G2.g1, Word.of((g02, -1), (g12, +1), (g01, +1)))
    x0_2 = vertex_object(G, x, 0, 2)
    a = None
    for cand in sorted(G2.g2.group(x0_2).elements):
        if G2.feedback(cand) == want_feedback and F.levels[2].apply_mor2(cand) == b_p:
            a = cand
            break
    if a is None:
        raise LiftSearchError("fiber-bijectivity", "no 2-cell with the required feedback and image")
    trace.data["a"] = a

    # 5. assemble; the second descent condition follows from pi2-injectivity
    lifted = DescentDatum(x, g, a)
    ok, report = is_descent_datum(G, lifted)
    if not ok:
        raise CrossedDescError(f"lifted triple fails the descent checks: {report.violations}")
    u = _second_condition_defect(G, lifted)
    trace.data["u"] = u
    if u != G.levels[3].g2.identity(vertex_object(G, x, 0, 3)):
        raise CrossedDescError("second-condition defect of the lift is not the identity")

    c = H1.g2.inv(H1.twist(H1.g1.inverse(f0), c_p))
    witness = GaugeTransformation(f, c)
    ok, report = is_gauge(H, witness, target, apply_morphism(F, lifted))
    if not ok:
        raise CrossedDescError(f"lift witness fails the gauge checks: {report.violations}")
    trace.data.update({"c": c, "lifted": lifted, "witness": witness})
    return lifted, witness, trace


def _second_condition_defect(D: CrossedDiagram, t: DescentDatum) -> str:
    """a_(0,1,3)^-1 . a_(0,2,3) . a_(0,1,2) . twist(g_(0,1)^-1, a_(1,2,3))^-1."""
    L3 = D.levels[3]
    grp = L3.g2
    a012 = _push2(D, t.a, (0, 1, 2), 3)
    a013 = _push2(D, t.a, (0, 1, 3), 3)
    a023 = _push2(D, t.a, (0, 2, 3), 3)
    a123 = _push2(D, t.a, (1, 2, 3), 3)
    g01 = _push1(D, t.g, (0, 1), 3)
    lhs = grp.mul(grp.mul(grp.inv(a013), a023), a012)
    return grp.mul(lhs, grp.inv(L3.twist(L3.g1.inverse(g01), a123)))


# -- lifting gauge transformations (injectivity chase) ------------------


def lift_gauge(
    F: DiagramMorphism,
    src: DescentDatum,
    dst: DescentDatum,
    t: GaugeTransformation,
) -> tuple[GaugeTransformation, LiftTrace]:
    """Lift a gauge transformation between images back to the source."""
    G, H = F.source, F.target
    y_datum = apply_morphism(F, src)
    yp_datum = apply_morphism(F, dst)
    ok, _ = is_gauge(H, t, y_datum, yp_datum)
    if not ok:
        raise DomainError("input pair is not a gauge transformation between the images")
    H0, H1 = H.levels[0], H.levels[1]
    G1 = G.levels[1]
    y = y_datum.x
    h = y_datum.g
    trace = LiftTrace("injectivity", {"src": src, "dst": dst, "input": t})

    # 1. least (e, v) with F(e) = f . D(v)
    e = v = None
    for e_cand in G.levels[0].g1.hom(src.x, dst.x):
        fe = F.levels[0].apply_mor1(e_cand)
        for v_cand in sorted(H0.g2.group(y).elements):
            if fe == H0.g1.compose(t.f, H0.feedback(v_cand)):
                e, v = e_cand, v_cand
                break
        if e is not None:
            break
    if e is None:
        raise LiftSearchError("hom-quotient-surjectivity", "no (e, v) with F(e) = f . D(v)")
    f_tilde = H0.g1.compose(t.f, H0.feedback(v))
    v0 = _push2(H, v, (0,), 1)
    v1 = _push2(H, v, (1,), 1)
    c_tilde = H1.g2.mul(
        H1.g2.mul(H1.twist(H1.g1.inverse(h), H1.g2.inv(v1)), t.c), v0
    )
    ok, report = is_gauge(H, GaugeTransformation(f_tilde, c_tilde), y_datum, yp_datum)
    if not ok:
        raise CrossedDescError(f"adjusted gauge fails verification: {report.violations}")
    trace.data.update({"e": e, "v": v, "f_tilde": f_tilde, "c_tilde": c_tilde})

    # 2. least d' with D(d') = g^-1 . e_(1)^-1 . g' . e_(0)
    e0 = _push1(G, e, (0,), 1)
    e1 = _push1(G, e, (1,), 1)
    want = evaluate_word(
        G1.g1, Word.of((src.g, -1), (e1, -1), (dst.g, +1), (e0, +1))
    )
    x0 = vertex_object(G, src.x, 0, 1)
    d_p = None
    for cand in sorted(G1.g2.group(x0).elements):
        if G1.feedback(cand) == want:
            d_p = cand
            break
    if d_p is None:
        raise LiftSearchError("cokernel-injectivity", "no d' with the required feedback")
    trace.data["d_p"] = d_p

    # 3. the kernel correction: w = c~ . F(d')^-1, its unique kernel preimage
    w = H1.g2.mul(c_tilde, H1.g2.inv(F.levels[1].apply_mor2(d_p)))
    y0 = vertex_object(H, y, 0, 1)
    if H1.feedback(w) != H1.g1.identity(y0):
        raise CrossedDescError("kernel correction has nontrivial feedback")
    one = G1.g1.identity(x0)
    v2 = None
    for cand in sorted(G1.g2.group(x0).elements):
        if G1.feedback(cand) == one and F.levels[1].apply_mor2(cand) == w:
            v2 = cand
            break
    if v2 is None:
        raise LiftSearchError("kernel-bijectivity", "no kernel element mapping onto the correction")
    d = G1.g2.mul(v2, d_p)
    trace.data.update({"w": w, "v2": v2, "d": d})

    lifted = GaugeTransformation(e, d)
    ok, report = is_gauge(G, lifted, src, dst)
    if not ok:
        raise CrossedDescError(f"lifted gauge fails verification: {report.violations}")
    u = _gauge_condition_defect(G, lifted, src, dst)
    trace.data["u"] = u
    if u != G.levels[2].g2.identity(vertex_object(G, src.x, 0, 2)):
        raise CrossedDescError("gauge-condition defect of the lift is not the identity")
    trace.data["lifted"] = lifted
    return lifted, trace


def _gauge_condition_defect(
    D: CrossedDiagram, t: GaugeTransformation, src: DescentDatum, dst: DescentDatum
) -> str:
    """twist(e_(0)^-1, a')^-1 . d_(0,2)^-1 . a . twist(g_(0,1)^-1, d_(1,2)) . d_(0,1)."""
    L2 = D.levels[2]
    grp = L2.g2
    e0 = _push1(D, t.f, (0,), 2)
    d01 = _push2(D, t.c, (0, 1), 2)
    d02 = _push2(D, t.c, (0, 2), 2)
    d12 = _push2(D, t.c, (1, 2), 2)
    g01 = _push1(D, src.g, (0, 1), 2)
    head = grp.inv(L2.twist(L2.g1.inverse(e0), dst.a))
    tail = grp.mul(
        grp.mul(grp.mul(grp.inv(d02), src.a), L2.twist(L2.g1.inverse(g01), d12)), d01
    )
    return grp.mul(head, tail)


# -- trace re-validation ------------------------------------------------


def revalidate_lift_trace(F: DiagramMorphism, trace: LiftTrace) -> ValidationReport:
    """Recompute every recorded equation of a trace from its stored elements."""
    report = ValidationReport()
    G, H = F.source, F.target
    d = trace.data
    if trace.kind == "surjectivity":
        target: DescentDatum = d["target"]
        H1 = H.levels[1]
        f0 = _push1(H, d["f"], (0,), 1)
        f1 = _push1(H, d["f"], (1,), 1)
        h_pp = evaluate_word(H1.g1, Word.of((f1, +1), (target.g, +1), (f0, -1)))
        if h_pp != d["h_pp"]:
            report.add("trace", "transported 1-morphism does not recompute")
        if F.levels[0].apply_obj(d["x"]) != d["y_prime"]:
            report.add("trace", "image object does not recompute")
        if F.levels[1].apply_mor1(d["g"]) != d["h_p"]:
            report.add("trace", "image 1-morphism does not recompute")
        if H1.g1.compose(d["h_p"], H1.feedback(d["c_p"])) != d["h_pp"]:
            report.add("trace", "correction equation h'' = F(g) . D(c') fails")
        lifted: DescentDatum = d["lifted"]
        ok, _ = is_descent_datum(G, lifted)
        if not ok:
            report.add("trace", "lifted triple no longer passes the descent checks")
        if F.levels[2].apply_mor2(lifted.a) != d["b_p"]:
            report.add("trace", "image 2-cell does not recompute")
        if d["u"] != G.levels[3].g2.identity(vertex_object(G, lifted.x, 0, 3)):
            report.add("trace", "recorded defect is not the identity")
        if _second_condition_defect(G, lifted) != d["u"]:
            report.add("trace", "defect does not recompute")
        ok, _ = is_gauge(H, d["witness"], target, apply_morphism(F, lifted))
        if not ok:
            report.add("trace", "witness gauge no longer verifies")
    elif trace.kind == "injectivity":
        src: DescentDatum = d["src"]
        dst: DescentDatum = d["dst"]
        t: GaugeTransformation = d["input"]
        H0, H1 = H.levels[0], H.levels[1]
        G1 = G.levels[1]
        if F.levels[0].apply_mor1(d["e"]) != H0.g1.compose(t.f, H0.feedback(d["v"])):
            report.add("trace", "F(e) = f . D(v) fails")
        y_datum = apply_morphism(F, src)
        v0 = _push2(H, d["v"], (0,), 1)
        v1 = _push2(H, d["v"], (1,), 1)
        c_tilde = H1.g2.mul(
            H1.g2.mul(H1.twist(H1.g1.inverse(y_datum.g), H1.g2.inv(v1)), t.c), v0
        )
        if c_tilde != d["c_tilde"]:
            report.add("trace", "adjusted 2-component does not recompute")
        e0 = _push1(G, d["e"], (0,), 1)
        e1 = _push1(G, d["e"], (1,), 1)
        want = evaluate_word(
            G1.g1, Word.of((src.g, -1), (e1, -1), (dst.g, +1), (e0, +1))
        )
        if G1.feedback(d["d_p"]) != want:
            report.add("trace", "feedback of d' does not recompute")
        w = H1.g2.mul(d["c_tilde"], H1.g2.inv(F.levels[1].apply_mor2(d["d_p"])))
        if w != d["w"]:
            report.add("trace", "kernel correction does not recompute")
        if F.levels[1].apply_mor2(d["v2"]) != w:
            report.add("trace", "kernel preimage does not recompute")
        if G1.g2.mul(d["v2"], d["d_p"]) != d["d"]:
            report.add("trace", "final 2-component does not recompute")
        ok, _ = is_gauge(G, d["lifted"], src, dst)
        if not ok:
            report.add("trace", "lifted gauge no longer verifies")
        if _gauge_condition_defect(G, d["lifted"], src, dst) != d["u"]:
            report.add("trace", "defect does not recompute")
    else:
        report.add("trace", f"unknown trace kind {trace.kind!r}")
    return report


# -- bijection verification ---------------------------------------------


@dataclass
class BijectionReport:
    source_classes: ClassTable
    target_classes: ClassTable
    class_map: dict[DescentDatum, DescentDatum]
    surjectivity: dict[DescentDatum, tuple[DescentDatum, GaugeTransformation, LiftTrace]]
    injectivity: dict[
        tuple[DescentDatum, DescentDatum], tuple[GaugeTransformation, LiftTrace]
    ]
    oracle_bijective: bool
    constructive_bijective: bool

    @property
    def agree(self) -> bool:
        return self.oracle_bijective == self.constructive_bijective

    def as_json(self, include_traces: bool = False) -> dict:
        def dd(t):
            return {"x": t.x, "g": t.g, "a": t.a}

        out = {
            "sourceClasses": len(self.source_classes.reps),
            "targetClasses": len(self.target_classes.reps),
            "classMap": [
                {"source": dd(s), "target": dd(t)} for s, t in sorted(self.class_map.items())
            ],
            "oracleBijective": self.oracle_bijective,
            "constructiveBijective": self.constructive_bijective,
            "agree": self.agree,
        }
        if include_traces:
            out["surjectivityWitnesses"] = [
                trace.as_json() for _, _, trace in self.surjectivity.values()
            ]
            out["injectivityWitnesses"] = [
                trace.as_json() for _, trace in self.injectivity.values()
            ]
        return out


def verify_bijection(F: DiagramMorphism, bound: int = 1_000_000) -> BijectionReport:
    """Check the induced map on gauge classes two independent ways.

    The enumeration route classifies both sides and inspects the induced map
    on representatives; the constructive route lifts every target class and
    every image collision.  A disagreement raises a hard error.
    """
    ok, report = is_weak_equivalence_diagram(F)
    if not ok:
        raise DomainError(f"not a weak equivalence: {[v.detail for v in report]}")
    src_classes = gauge_classes(F.source, bound)
    tgt_classes = gauge_classes(F.target, bound)

    class_map = {
        r: tgt_classes.rep_of[apply_morphism(F, r)] for r in src_classes.reps
    }
    oracle_injective = len(set(class_map.values())) == len(class_map)
    oracle_surjective = set(class_map.values()) == set(tgt_classes.reps)
    oracle_bijective = oracle_injective and oracle_surjective

    # constructive surjectivity: lift a representative of every target class
    surjectivity = {}
    hit_source_classes = set()
    constructive_surjective = True
    for tr in tgt_classes.reps:
        try:
            lifted, witness, trace = lift_descent(F, tr)
        except LiftSearchError:
            constructive_surjective = False
            continue
        surjectivity[tr] = (lifted, witness, trace)
        hit_source_classes.add(src_classes.rep_of[lifted])

    # constructive injectivity: merge source classes whose images collide
    injectivity = {}
    collisions: dict[DescentDatum, list[DescentDatum]] = {}
    for s, t in class_map.items():
        collisions.setdefault(t, []).append(s)
    merged = {r: r for r in src_classes.reps}

    def find(r):
        while merged[r] != r:
            merged[r] = merged[merged[r]]
            r = merged[r]
        return r

    constructive_injective = True
    for group in collisions.values():
        group = sorted(group)
        base = group[0]
        for other in group[1:]:
            t = _target_gauge_between_images(F, tgt_classes, other, base)
            try:
                lifted_gauge, trace = lift_gauge(F, other, base, t)
            except LiftSearchError:
                constructive_injective = False
                continue
            injectivity[(other, base)] = (lifted_gauge, trace)
            ra, rb = find(base), find(other)
            if ra != rb:
                merged[max(ra, rb)] = min(ra, rb)
    merged_count = len({find(r) for r in src_classes.reps})
    constructive_bijective = (
        constructive_surjective
        and constructive_injective
        and merged_count == len(tgt_classes.reps)
    )

    result = BijectionReport(
        src_classes,
        tgt_classes,
        class_map,
        surjectivity,
        injectivity,
        oracle_bijective,
        constructive_bijective,
    )
    if not result.agree:
        raise CrossedDescError(
            "bijection routes disagree: "
            f"oracle={oracle_bijective}, constructive={constructive_bijective}"
        )
    return result


def _target_gauge_between_images(
    F: DiagramMorphism,
    tgt_classes: ClassTable,
    src_a: DescentDatum,
    src_b: DescentDatum,
) -> GaugeTransformation:
    """A verified target gauge F(src_a) -> F(src_b), via the class witnesses."""
    H = F.target
    ia, ib = apply_morphism(F, src_a), apply_morphism(F, src_b)
    wa = tgt_classes.witnesses[ia]  # ia -> rep
    wb = tgt_classes.witnesses[ib]  # ib -> rep
    t = gauge_compose(H, gauge_invert(H, wb), wa)
    ok, report = is_gauge(H, t, ia, ib)
    if not ok:
        raise CrossedDescError(f"composed target gauge fails verification: {report.violations}")
    return t
