"""Entry point for running gpr-denoise as a module."""

from gpr_denoise.cli import main

if __name__ == "__main__":
    main()
