"""Regenerate the golden facet catalogs shipped with the package.

Runs the complete d=2 and d=3 correlator-polytope enumerations plus the
canonical CGLMP forms and freezes the results under src/bellpoly/golden/.
Deterministic: reruns must be byte-identical.
"""

from __future__ import annotations

import json
import pathlib

from bellpoly.correlators import cglmp_corr_inequality, projected_generators
from bellpoly.facets import canonicalize, classify_trivial, enumerate_facets, standard_equations, vrep_of
from bellpoly.jsonio import encode_rational
from bellpoly.scenario import inequality_to_json
from bellpoly.symmetry import canonical_class, label_classes

GOLDEN = pathlib.Path(__file__).resolve().parents[1] / "src" / "bellpoly" / "golden"


def facet_catalog(d: int) -> dict:
    gens = projected_generators(d)
    hrep = enumerate_facets(vrep_of(gens), space="correlator", d=d)
    labels, reps = label_classes(hrep.facets)
    trivial = [classify_trivial(f) for f in hrep.facets]
    return {
        "space": "correlator",
        "d": d,
        "complete": hrep.complete,
        "reduced_dim": hrep.reduced_dim,
        "equations": [
            {"coeffs": [encode_rational(c) for c in row], "rhs": encode_rational(rhs)}
            for row, rhs in hrep.equations
        ],
        "facets": [
            {
                "coeffs": [encode_rational(c) for c in f.coeffs],
                "bound": encode_rational(f.bound),
                "trivial": trivial[i],
                "class": labels[i],
            }
            for i, f in enumerate(hrep.facets)
        ],
    }


def main() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for d in (2, 3):
        path = GOLDEN / f"corr_facets_d{d}.json"
        path.write_text(json.dumps(facet_catalog(d), indent=1, sort_keys=True) + "\n")
        print("wrote", path)
    cg3 = cglmp_corr_inequality(3)
    blob = {
        "canonical": inequality_to_json(canonicalize(cg3)),
        "canonical_gauged": inequality_to_json(
            canonicalize(cg3, equations=standard_equations("correlator", 3))
        ),
        "class_representative": inequality_to_json(canonical_class(cg3)),
    }
    path = GOLDEN / "cglmp_corr_d3_canonical.json"
    path.write_text(json.dumps(blob, indent=1, sort_keys=True) + "\n")
    print("wrote", path)


if __name__ == "__main__":
    main()
