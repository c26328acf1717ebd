"""
Model file schema
"""
from pydantic import BaseModel, ConfigDict, Field
from typing import List, Optional

MODEL_FILE_VERSION = 1


class ModelFile(BaseModel):
    """
    JSON serialization of a hidden Markov model, e.g.

        {
          "version": 1,
          "alphabet": ["a", "b"],
          "states": 2,
          "transitions": [[0.9, 0.1], [0.1, 0.9]],
          "emissions": [[1.0, 0.0], [0.0, 1.0]],
          "pi0": null
        }

    `pi0` omitted or null means "start from the stationary distribution".
    """
    model_config = ConfigDict(extra="forbid")

    version: int = Field(MODEL_FILE_VERSION, description="Schema version")
    alphabet: List[str] = Field(..., min_length=1, description="Ordered output symbols")
    states: int = Field(..., ge=1, description="Number of hidden states k")
    transitions: List[List[float]] = Field(..., description="k x k row-stochastic matrix")
    emissions: List[List[float]] = Field(..., description="k x |alphabet| row-stochastic matrix")
    pi0: Optional[List[float]] = Field(None, description="Explicit initial distribution")
