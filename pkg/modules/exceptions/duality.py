from .general_exceptions import EngineException

class DualityException(EngineException):
  exit_code = 5

class TransportException(DualityException):
  def __init__(self, degree, first_dim, second_dim, presentations=('simplicial', 'dual-block')):
    super().__init__(
      f"Presentations disagree in degree {degree}: "
      f"{presentations[0]} dimension {first_dim}, {presentations[1]} dimension {second_dim}"
    )
    self.degree = degree

class RepresentativeInstabilityException(DualityException):
  def __init__(self, degrees, trial):
    super().__init__(f"Pairing in degrees {degrees} changed under re-representation trial {trial}")
    self.trial = trial

class NotAllowableException(DualityException):
  def __init__(self, message="Representative is not allowable"):
    super().__init__(message)

class SequenceShapeException(DualityException):
  def __init__(self, message="Sequence shape mismatch"):
    super().__init__(message)

class MisCenteredLadderException(DualityException):
  def __init__(self, k, link_dimension):
    super().__init__(f"Ladder is not centred on degree {k}: link dimension is {link_dimension}")

class ParityContradictionException(DualityException):
  def __init__(self, message):
    super().__init__(message)
