"""TRIZ problem-solving workbench.

An LLM-assisted implementation of the four-step TRIZ workflow (problem
analysis, parameter mapping, contradiction analysis, solution reasoning)
with designer checkpoints between steps, plus an evaluation harness for
measuring contradiction recall/precision and solution similarity against
annotated case collections.
"""

__version__ = "0.1.0"

from .knowledge import (
    ContradictionMatrix,
    EngineeringParameter,
    InventivePrinciple,
    KnowledgeBase,
    default_knowledge_base,
    load_knowledge_base,
)

__all__ = [
    "ContradictionMatrix",
    "EngineeringParameter",
    "InventivePrinciple",
    "KnowledgeBase",
    "default_knowledge_base",
    "load_knowledge_base",
    "__version__",
]
