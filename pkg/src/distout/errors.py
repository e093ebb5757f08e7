class DistoutError(Exception):
    message: str
    error_code: str

    def __init__(self, message, error_code):
        super().__init__(message)
        self.message = message
        self.error_code = error_code

    def __str__(self) -> str:
        return f"{self.error_code}: {self.message}"


class ModelDomainError(DistoutError):
    pass


class ChannelConfigError(DistoutError):
    pass


class MutualInfoError(DistoutError):
    pass


class OutageError(DistoutError):
    pass


class ExponentError(DistoutError):
    pass


class SlopeError(ExponentError):
    pass


class SweepError(DistoutError):
    pass


class ScenarioFileError(DistoutError):
    line: int | None

    def __init__(self, message, error_code, line: int | None = None):
        super().__init__(message, error_code)
        self.line = line

    def __str__(self) -> str:
        where = f" (line {self.line})" if self.line is not None else ""
        return f"{self.error_code}: {self.message}{where}"


class ResultTableError(DistoutError):
    pass


class FigureError(DistoutError):
    pass
