from enum import Enum


class KernelKind(Enum):
    """g(t): SINE は √(1−t²)、COSINE は |t|"""
    SINE = "sine"
    COSINE = "cosine"
