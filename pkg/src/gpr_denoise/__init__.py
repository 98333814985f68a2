"""GPR Denoise - Variational mode decomposition de-noising for ground penetrating radar."""
