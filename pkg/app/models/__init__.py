from app.models.schemas import (
    BasisIndex,
    CharacterPair,
    ExtensionClass,
    FieldShape,
    Finding,
    JXPair,
    SerreWeight,
    SweepConfig,
)

__all__ = [
    "BasisIndex",
    "CharacterPair",
    "ExtensionClass",
    "FieldShape",
    "Finding",
    "JXPair",
    "SerreWeight",
    "SweepConfig",
]
