"""Environment-assisted shortcuts to adiabaticity.

Builds the unique environment unitary that steers every branch of an even
branching state through the adiabatic manifold of a driven system, and
checks the cost-equality and non-unitarity claims numerically. The heavy
lifting lives in the compiled ``_core`` extension; this package re-exports
its surface.

Quick start::

    import easta

    schedule = easta.DriveSchedule("cosine-squared", B=1.0, tau=1.0)
    path = easta.build_path(schedule, steps=2000)
    frame = easta.eigenframe(path)
    phases = easta.adiabatic_phases(frame)
    prop = easta.propagate(path)
    u_env = easta.easta_unitary(prop, frame, phases, k=1000)
"""

from ._core import (  # noqa: F401
    BranchingState,
    CostCurve,
    DefectDecomposition,
    DriveSchedule,
    EigenFrame,
    EnvControlMap,
    EvenEmbedding,
    HamiltonianPath,
    PhaseRecord,
    PropagationResult,
    __version__,
    adiabatic_phases,
    apply_joint,
    bare_branch_overlap,
    build_path,
    cd_hamiltonian,
    cd_unitary,
    default_config_json,
    easta_branch_overlap,
    easta_unitary,
    embed_env_unitary,
    embed_even,
    env_hamiltonian,
    eigenframe,
    even_branching,
    evolved_eigenstate,
    generalized_env_unitary,
    hermitian_eig,
    hermiticity_defect,
    integrate_grid,
    make_branching,
    path_from_samples,
    process_cost,
    propagate,
    qubit_hamiltonian,
    random_gapped_path,
    reduced_system_state,
    run_experiment,
    run_verify,
    schedule_value,
    similarity_map,
    spectral_norm,
    uneven_map,
    unitarity_defect,
    unitarity_defect_decomposition,
    unitary_step,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
