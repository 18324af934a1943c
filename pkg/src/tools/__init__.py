"""
Scenario-level operations: scans, zero search, claims, reconstruction and output
"""

from .scan_tool import scan
from .zeros_tool import find_entanglement_zeros
from .claims_tool import check_claims
from .reconstruction_tool import run_reconstruction
from .table_tool import emit

__all__ = ["scan", "find_entanglement_zeros", "check_claims", "run_reconstruction", "emit"]
