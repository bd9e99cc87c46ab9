"""Structure-preserving texture smoothing with Gaussian/Laplacian pyramid guidance.

Submodules load on first attribute access so that the CLI can size the
numba thread pool before numba is imported.
"""

from importlib import import_module

__version__ = "0.1.0"

_EXPORTS = {
    "applications": ["AppConfig", "abstraction", "detail_enhance", "inverse_halftone",
                     "ldr_enhance", "tonemap"],
    "bilateral": ["BilateralParams", "jbf", "jbf_upsample", "range_weight"],
    "image": ["ContractError", "FormatError", "load_hdr", "load_image", "max_abs_diff", "mse",
              "psnr", "save_hdr", "save_image"],
    "psu": ["FilterParams", "make_schedule", "psu_step", "psu_step_variant_e",
            "pyramid_texture_filter"],
    "pyramid": ["build_gaussian_pyramid", "build_laplacian_pyramid", "collapse",
                "downsample_half", "gaussian_kernel_5x5", "upsample_bilinear"],
}
_OWNER = {name: mod for mod, names in _EXPORTS.items() for name in names}

__all__ = sorted(_OWNER)


def __getattr__(name):
    if name in _OWNER:
        return getattr(import_module(f".{_OWNER[name]}", __name__), name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
