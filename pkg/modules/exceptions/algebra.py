from .general_exceptions import EngineException

class AlgebraException(EngineException):
  exit_code = 2

class DimensionMismatchException(AlgebraException):
  def __init__(self, message="Matrix dimensions do not match"):
    super().__init__(message)

class PreconditionException(AlgebraException):
  def __init__(self, message="Boundary vectors are not contained in the span of the cycle vectors"):
    super().__init__(message)

class NotInSpanException(AlgebraException):
  def __init__(self, message="Vector is not in the span of the basis"):
    super().__init__(message)

class SingularMatrixException(AlgebraException):
  def __init__(self, message="Matrix is not invertible"):
    super().__init__(message)
