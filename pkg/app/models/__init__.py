from app.models.base import PerfectBaseData, TPMonomial
from app.models.complexes import (
    DPBasisElem,
    DPComplexData,
    GrNygaardReport,
    NygaardComplex,
    SyntomicComplex,
    TowerComplex,
    TowerTruncation,
)
from app.models.matrix import HomologyGroup, PModMatrix, SNFResult
from app.models.witt import ValScalar, WittElem, WittRing

__all__ = [
    "WittRing", "WittElem", "ValScalar",
    "PModMatrix", "SNFResult", "HomologyGroup",
    "DPBasisElem", "DPComplexData", "NygaardComplex", "SyntomicComplex",
    "TowerComplex", "TowerTruncation", "GrNygaardReport",
    "PerfectBaseData", "TPMonomial",
]
