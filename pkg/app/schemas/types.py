from typing import Annotated, Any

import numpy as np
from numpy.typing import NDArray
from pydantic import ConfigDict, PlainValidator

ComplexMatrix = NDArray[np.complex128]
RealVector = NDArray[np.float64]

# Shared by every model that carries arrays.
ARRAY_MODEL_CONFIG = ConfigDict(arbitrary_types_allowed=True, frozen=True)


def readonly_complex(value: Any) -> ComplexMatrix:
    """Copy ``value`` into a complex128 array that cannot be written to."""
    arr = np.array(value, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


def readonly_real(value: Any) -> RealVector:
    arr = np.array(value, dtype=np.float64)
    arr.setflags(write=False)
    return arr


ComplexArray = Annotated[ComplexMatrix, PlainValidator(readonly_complex)]
RealArray = Annotated[RealVector, PlainValidator(readonly_real)]
