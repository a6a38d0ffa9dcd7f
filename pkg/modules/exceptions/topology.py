from .general_exceptions import EngineException, ResourceNotFoundException

class ComplexException(EngineException):
  exit_code = 3

  def __init__(self, message, simplex=None, exit_code=None):
    if simplex is not None:
      message = f"{message}: {simplex}"
    super().__init__(message, exit_code)
    self.simplex = simplex

class DuplicateVertexException(ComplexException):
  def __init__(self, simplex, message="Simplex repeats a vertex"):
    super().__init__(message, simplex)

class DegreeOutOfRangeException(ComplexException):
  def __init__(self, degree, low, high):
    super().__init__(f"Degree {degree} outside the range {low}..{high}")
    self.degree = degree

class VertexNotFoundException(ComplexException, ResourceNotFoundException):
  def __init__(self, vertex):
    super().__init__("Vertex not found", vertex, exit_code=4)

class NotPureException(ComplexException):
  def __init__(self, message="Complex is not pure"):
    super().__init__(message)

class NotPseudomanifoldException(ComplexException):
  def __init__(self, message="Complex is not a pseudomanifold"):
    super().__init__(message)

class NotASubcomplexException(ComplexException):
  def __init__(self, simplex, message="Simplex of the subcomplex is missing from the complex"):
    super().__init__(message, simplex)

class SimplicialityException(ComplexException):
  def __init__(self, message, simplex=None):
    super().__init__(message, simplex)

class StratificationException(ComplexException):
  def __init__(self, message, simplex=None):
    super().__init__(message, simplex)

class PerversityException(EngineException):
  exit_code = 3

  def __init__(self, message="Invalid perversity"):
    super().__init__(message)

class RegimeException(EngineException):
  exit_code = 3

  def __init__(self, message="Real-regime homology is undefined with codimension 1 strata"):
    super().__init__(message)

class ComplexFileParseException(ComplexException):
  def __init__(self, line_number, message):
    super().__init__(f"line {line_number}: {message}")
    self.line_number = line_number

class ModelValidationException(ComplexException):
  def __init__(self, name, message):
    super().__init__(f"Model '{name}' failed validation: {message}")
