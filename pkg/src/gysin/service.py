"""HTTP service exposing the exact-arithmetic engine.

A thin FastAPI layer: every endpoint validates its request with a pydantic
model, calls the pure library code, and returns the corresponding report
dictionary unchanged (the same objects the CLI renders).  Engine errors
(:class:`~gysin.algebra.GysinError`) map to HTTP 422 with the error type
and message; nothing here holds state, so the app is safe to share.
"""

from __future__ import annotations

import math

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .algebra import (
    CLASSES,
    DEFAULT_DEGREE_CAP,
    SCHEMA_VERSION,
    GysinError,
    element_to_text,
    param_r,
    param_s,
    parse_element,
)
from .bundles import (
    DeclaredModel,
    FourManifoldModel,
    TrivialFamilyModel,
    example_models,
)
from .grr import (
    closed_form_degree2,
    corollary_realizations,
    index_chern_character,
    integrality_witness,
)
from .lattices import IntMatrix, edge_kernel, torsion_sweep, verify_free_basis
from .stable_rings import (
    BOUNDARY,
    CLOSED,
    RingSpec,
    bigraded_hilbert,
    collapse_consistency,
    enumerate_generators,
    hilbert_series,
)

__all__ = ["create_app"]


# ---------------------------------------------------------------------------
# request models


class GeneratorsRequest(BaseModel):
    ring: str = "hol"
    g: int | None = None
    k: int | None = None
    variant: str | None = None
    maxdeg: int = Field(default=4, ge=0)


class HilbertRequest(BaseModel):
    ring: str = "hol"
    g: int | None = None
    k: int | None = None
    variant: str | None = None
    maxdeg: int = Field(default=4, ge=0)
    check_collapse: bool = False


class GrrRequest(BaseModel):
    r: int | None = None
    s: int | None = None
    symbolic: bool = False
    maxdeg: int = Field(default=2, ge=0)


class BasisCheckRequest(BaseModel):
    models: list[str] | None = None
    custom_model: dict | None = None


class OrdersRequest(BaseModel):
    g_min: int
    g_max: int
    k_min: int
    k_max: int


class RestrictRequest(BaseModel):
    g: int = 6
    k: int = 0
    classes: list[str]
    truncation: int = Field(default=24, ge=2)


class CertifyRequest(BaseModel):
    maxdeg: int = Field(default=20, ge=0)
    g: int = 6
    k: int = 0


# ---------------------------------------------------------------------------
# report builders


def _ring_spec(name, g, k, variant):
    name = name.lower()
    if name == "pic":
        if g is None or k is None:
            raise GysinError("the pic ring needs --g and --k")
        return RingSpec("pic", g=g, k=k)
    if name == "bigraded":
        return RingSpec("bigraded", variant=variant or BOUNDARY)
    return RingSpec(name)


def generators_report(req: GeneratorsRequest):
    spec = _ring_spec(req.ring, req.g, req.k, req.variant)
    rows = []
    for row in enumerate_generators(spec, req.maxdeg):
        entry = {"name": row[0], "degree": row[1]}
        if len(row) == 3:
            entry["bidegree"] = list(row[2])
        rows.append(entry)
    return {
        "schema_version": SCHEMA_VERSION,
        "ring": spec.label(),
        "maxdeg": req.maxdeg,
        "rows": rows,
    }


def hilbert_report(req: HilbertRequest):
    if req.check_collapse:
        g = req.g if req.g is not None else 6
        k = req.k if req.k is not None else 0
        return collapse_consistency(g, k, req.maxdeg).to_json_dict()
    spec = _ring_spec(req.ring, req.g, req.k, req.variant)
    if spec.is_bigraded:
        data = bigraded_hilbert(spec.variant, req.maxdeg).to_json_dict()
    else:
        data = hilbert_series(spec, req.maxdeg).to_json_dict()
    data["ring"] = spec.label()
    data["maxdeg"] = req.maxdeg
    return data


def grr_report(req: GrrRequest):
    if req.symbolic:
        r, s = param_r(), param_s()
    else:
        if req.r is None or req.s is None:
            raise GysinError("grr needs --r and --s, or --symbolic")
        r, s = req.r, req.s
    expansion = index_chern_character(r, s, maxdeg=req.maxdeg)
    report = expansion.to_json_dict()
    report["degree2_text"] = element_to_text(expansion.degree2_canonical())
    match = expansion.degree2_canonical() == closed_form_degree2(r, s)
    report["closed_form_match"] = match
    if not req.symbolic:
        report["witness"] = list(integrality_witness(req.r, req.s))
    report["passed"] = bool(match) and report["integral"] is not False
    return report


_NAMED_MODELS = {
    "declared": DeclaredModel,
    "trivial": lambda: TrivialFamilyModel(2, 0),
    "hirzebruch": FourManifoldModel.hirzebruch,
}


def _model_label(model):
    if isinstance(model, DeclaredModel):
        return model.label
    if isinstance(model, TrivialFamilyModel):
        return f"trivial(g={model.g},k={model.k})"
    return "4-manifold"


def _exact_coordinate(value):
    """Exact JSON encoding: int when integral, rational string otherwise."""
    iv = int(value)
    return iv if iv == value else str(value)


def basis_check_report(req: BasisCheckRequest):
    models = []
    if req.custom_model is not None:
        models.append(FourManifoldModel.from_json_dict(req.custom_model))
    for name in req.models or ():
        try:
            factory = _NAMED_MODELS[name.lower()]
        except KeyError:
            raise GysinError(
                f"unknown model {name!r}; expected one of "
                f"{', '.join(sorted(_NAMED_MODELS))}"
            ) from None
        models.append(factory())
    if not models and req.custom_model is None:
        models = list(example_models())

    vectors = [model.basis_vector() for model in models]
    labels = [_model_label(model) for model in models]
    report = {
        "schema_version": SCHEMA_VERSION,
        "models": labels,
        "basis": ["lambda", "m_{0,1}", "zeta"],
        "vectors": [[_exact_coordinate(c) for c in v] for v in vectors],
    }
    if len(vectors) == 3:
        certificate = verify_free_basis(vectors)
        report["determinant"] = certificate.det
        report["passed"] = certificate.passed
    return report


def orders_report(req: OrdersRequest):
    rows = torsion_sweep(req.g_min, req.g_max, req.k_min, req.k_max)
    return {
        "schema_version": SCHEMA_VERSION,
        "g_range": [req.g_min, req.g_max],
        "k_range": [req.k_min, req.k_max],
        "rows": [row.to_json_dict() for row in rows],
    }


def restrict_report(req: RestrictRequest):
    family = TrivialFamilyModel(req.g, req.k, truncation=req.truncation)
    rows = []
    for text in req.classes:
        element = parse_element(CLASSES, text)
        value = family.evaluate(element)
        rows.append({"name": text, "value": element_to_text(value)})
    return {
        "schema_version": SCHEMA_VERSION,
        "g": req.g,
        "k": req.k,
        "rows": rows,
    }


def certify_report(req: CertifyRequest):
    """Run every engine certificate and collect one pass/fail row each."""
    certificates = []

    def record(name, passed, detail):
        certificates.append(
            {"name": name, "passed": bool(passed), "detail": detail}
        )

    r, s = param_r(), param_s()
    symbolic = index_chern_character(r, s).degree2_canonical()
    closed = closed_form_degree2(r, s)
    record(
        "degree2-closed-form",
        symbolic == closed,
        "symbolic series expansion equals the closed form "
        + element_to_text(closed),
    )

    realizations = corollary_realizations()
    record(
        "realization-span",
        realizations.passed,
        f"vectors {[list(v) for v in realizations.vectors]} have "
        f"determinant {realizations.certificate.det}",
    )

    integral_ok = True
    for rr in range(-10, 11):
        for ss in range(-10, 11):
            coords = integrality_witness(rr, ss)
            if not all(isinstance(c, int) for c in coords):
                integral_ok = False
    record(
        "integrality-grid",
        integral_ok,
        "degree-2 coordinates integral on the grid [-10,10]^2",
    )

    vectors = [model.basis_vector() for model in example_models()]
    certificate = verify_free_basis(vectors)
    shown = [[_exact_coordinate(c) for c in v] for v in vectors]
    record(
        "basis-certificate",
        certificate.passed,
        f"model vectors {shown} have determinant {certificate.det}",
    )

    torsion_ok = True
    edge_ok = True
    for row in torsion_sweep(2, 30, -15, 15):
        expected = abs(math.gcd(2 - 2 * row.g, 1 - row.g - row.k))
        if row.h3_pic_order != expected:
            torsion_ok = False
        edge = edge_kernel(row.g, row.k)
        images = [
            sum(c * v for c, v in zip(edge.coefficients, vec))
            for vec in edge.kernel
        ]
        extension = IntMatrix.from_rows(
            [edge.kernel[0], edge.eta, edge.preimage]
        )
        if any(images) or abs(extension.det()) != 1:
            edge_ok = False
    record(
        "torsion-orders",
        torsion_ok,
        "h3 orders match the gcd formula on 2<=g<=30, |k|<=15",
    )
    record(
        "edge-kernel",
        edge_ok,
        "kernel vectors map to zero and extend to a unimodular basis "
        "on the same grid",
    )

    collapse = collapse_consistency(req.g, req.k, req.maxdeg)
    record(
        "collapse-consistency",
        collapse.passed,
        f"graded dimension identities hold to degree {req.maxdeg} "
        f"at (g, k) = ({req.g}, {req.k})",
    )

    passed = all(c["passed"] for c in certificates)
    return {
        "schema_version": SCHEMA_VERSION,
        "maxdeg": req.maxdeg,
        "certificates": certificates,
        "passed": passed,
    }


# ---------------------------------------------------------------------------
# the app


def create_app():
    app = FastAPI(title="gysin engine", version=SCHEMA_VERSION)

    @app.exception_handler(GysinError)
    async def _engine_error(request: Request, exc: GysinError):
        return JSONResponse(
            status_code=422,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.get("/v1/health")
    def health():
        return {
            "status": "ok",
            "schema_version": SCHEMA_VERSION,
            "degree_cap": DEFAULT_DEGREE_CAP,
        }

    @app.post("/v1/generators")
    def generators(req: GeneratorsRequest):
        return generators_report(req)

    @app.post("/v1/hilbert")
    def hilbert(req: HilbertRequest):
        return hilbert_report(req)

    @app.post("/v1/grr")
    def grr(req: GrrRequest):
        return grr_report(req)

    @app.post("/v1/basis-check")
    def basis_check(req: BasisCheckRequest):
        return basis_check_report(req)

    @app.post("/v1/orders")
    def orders(req: OrdersRequest):
        return orders_report(req)

    @app.post("/v1/restrict")
    def restrict(req: RestrictRequest):
        return restrict_report(req)

    @app.post("/v1/certify")
    def certify(req: CertifyRequest):
        return certify_report(req)

    return app
