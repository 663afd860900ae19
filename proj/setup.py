"""CMake-driven build of the risofdm._core extension.

The C++ core, CLI, and tests build with plain CMake; this file only teaches
pip/setuptools to drive the same CMake project when producing a wheel or an
editable install (use --no-build-isolation so the preinstalled toolchain is
visible).
"""

import os
import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import setup
from setuptools.command.build_ext import build_ext
from setuptools.extension import Extension


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp) / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        out_dir = Path(self.get_ext_fullpath(ext.name)).resolve().parent
        out_dir.mkdir(parents=True, exist_ok=True)

        env = dict(os.environ, RISOFDM_WHEEL_BUILD="1")
        cfg_args = [
            "cmake",
            "-S",
            str(source_dir),
            "-B",
            str(build_dir),
            f"-DPython3_EXECUTABLE={sys.executable}",
            "-DCMAKE_BUILD_TYPE=Release",
        ]
        subprocess.run(cfg_args, check=True, env=env)
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "risofdm_pymod"],
            check=True,
            env=env,
        )

        built = next((build_dir / "python" / "risofdm").glob("_core.*"))
        shutil.copy2(built, out_dir / built.name)


setup(
    packages=["risofdm"],
    package_dir={"": "python"},
    ext_modules=[CMakeExtension("risofdm._core")],
    cmdclass={"build_ext": CMakeBuild},
)
