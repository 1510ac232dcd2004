from .sweep import spectral_sweep as spectral_sweep
