"""Builds the _core extension with CMake and drops it into the package."""

import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


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

        configure = [
            "cmake",
            "-S", str(source_dir),
            "-B", str(build_dir),
            "-DEMOAUDIONET_BUILD_TESTS=OFF",
            "-DEMOAUDIONET_BUILD_PYTHON=ON",
            f"-DPYTHON_EXECUTABLE={sys.executable}",
            "-DCMAKE_BUILD_TYPE=Release",
        ]
        subprocess.run(configure, check=True)
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_core",
             "--parallel", str(os.cpu_count() or 2)],
            check=True,
        )

        built = list((build_dir / "python" / "emoaudionet").glob("_core*"))
        if not built:
            raise RuntimeError("cmake did not produce the _core extension")
        self.copy_file(str(built[0]), str(out_dir / built[0].name))


setup(
    ext_modules=[CMakeExtension("emoaudionet._core")],
    cmdclass={"build_ext": CMakeBuild},
)
