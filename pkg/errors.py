from typing import Iterable


class BenchError(Exception):
    """Base class for every error raised by the benchmark toolkit."""


class InvalidStepError(BenchError, ValueError):
    pass


class MalformedPathError(BenchError, ValueError):
    pass


class DegenerateSceneError(BenchError, ValueError):
    pass


class NoHorizontalOffsetError(BenchError, ValueError):
    pass


class InvalidCompositeError(BenchError, ValueError):
    pass


class SynonymTableError(BenchError, ValueError):
    pass


class GenerationError(BenchError):
    pass


class GoldMismatchError(BenchError):
    pass


class ConfigError(BenchError):
    pass


class DatasetLoadError(BenchError):
    def __init__(self, path: str, line_number: int, reason: str):
        super().__init__(f"{path}:{line_number}: {reason}")
        self.path = path
        self.line_number = line_number


class OrphanGenerationError(BenchError):
    def __init__(self, ids: Iterable[str]):
        self.ids = sorted(ids)
        super().__init__(f"generations without a dataset record: {', '.join(self.ids)}")


class InvalidShapeError(BenchError, ValueError):
    pass
