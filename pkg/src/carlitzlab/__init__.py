"""carlitzlab: exact function-field arithmetic with machine-checked bounds."""

from .ff import FieldConfig, FieldElement, field_config

__version__ = "0.1.0"

__all__ = [
    "FieldConfig",
    "FieldElement",
    "field_config",
    "__version__",
]
