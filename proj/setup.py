from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "hybridcast._hybridcast",
    sources=[
        "src/graph.cpp",
        "src/engine.cpp",
        "src/tk.cpp",
        "src/primitives.cpp",
        "src/dissemination.cpp",
        "src/apps.cpp",
        "bindings/pymodule.cpp",
    ],
    include_dirs=["include", "vendor"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
