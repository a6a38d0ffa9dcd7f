class EngineException(Exception):
  exit_code = 1
  stage = None

  def __init__(self, message='Engine error', exit_code=None):
    super().__init__(message)
    if exit_code is not None:
      self.exit_code = exit_code

class ResourceNotFoundException(EngineException):
  exit_code = 4

  def __init__(self, message = 'Resource Not Found Exception', exit_code=None):
    super().__init__(message, exit_code)

class ModelNotFoundException(ResourceNotFoundException):
  def __init__(self, name):
    super().__init__(f"Unknown model '{name}'")
    self.name = name
