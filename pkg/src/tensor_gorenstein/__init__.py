"""Exact homological algebra for tensor rings of bimodules over finite-dimensional algebras."""

from .algebra import (Arrow, FdAlgebra, Presentation, Quiver, build_from_quiver,
                      build_from_structure_constants, opposite, product_algebra, radical)
from .audit import AuditReport, CheckResult, emit_report, run_audit
from .enumeration import enumerate_modules, iter_modules
from .gorenstein import (admissible_report, cm_free_scan, frobenius_embedding, global_dimension,
                         gmon_test, gorenstein_context, gp_coresolution, gp_test, gpd,
                         injective_dimension, m_flat_test, perfect_test, tensor_ring_delta)
from .linalg import (FieldSpec, Matrix, homology_dim, kernel_basis, kron, rank, rref_rank,
                     solve)
from .modcat import (LEFT, RIGHT, HomDim, Module, ModuleHom, direct_sum, dual_D, ext_dim,
                     hom_basis, hom_dim, hom_factorization, is_isomorphic, pd_verdict,
                     projective_cover, projective_resolution, regular_module,
                     simples_and_projectives, star, syzygy, tor_dim)
from .scenario import Scenario, builtin, load_scenario, parse_scenario, save_scenario
from .tensor_ring import (Bimodule, RepPair, TensorRingAlgebra, build_tensor_ring, convert_rep,
                          induce, nilpotency_index, outer_tensor, split_mono_normal_form,
                          standard_sequence, tensor_over_R, tensor_power)

__all__ = [name for name in dir() if not name.startswith("_")]
