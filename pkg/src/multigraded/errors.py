class ValidationError(ValueError):
    """Raised when an input violates a documented precondition.

    ``location`` is an optional ``(line, column)`` pair used by the manifest
    parser; library code leaves it unset.
    """

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"line {location[0]}, column {location[1]}: {message}"
        super().__init__(message)
