from pathlib import Path
from setuptools import setup
import subprocess
import shlex
import sys


def consume_arg(arg: str) -> bool:
    if arg in sys.argv:
        sys.argv.remove(arg)
        return True
    return False


def read_requirements() -> list:
    lines = Path("requirements.txt").read_text().splitlines()
    return [line.strip() for line in lines if line.strip() and not line.startswith("#")]


def run_setup() -> None:
    setup(
        name="cgring",
        version="0.1.0",
        description="Quantum cohomology of the Cayley Grassmannian, verified exactly",
        long_description=Path("README.md").read_text(encoding="utf-8"),
        long_description_content_type="text/markdown",
        packages=["cgring"],
        package_data={"cgring": ["data/*.json"]},
        python_requires=">=3.9",
        install_requires=read_requirements(),
        entry_points={"console_scripts": ["cgring = cgring.cli:main"]},
    )


if __name__ == "__main__":
    for arg in sys.argv:
        if arg in ("--format", "--test"):
            break
    else:
        run_setup()
        sys.exit(0)

    if consume_arg("--format"):
        cmd = ["black", "."]
        print(shlex.join(cmd))
        subprocess.call(cmd)

    if consume_arg("--test"):
        cmd = [sys.executable, "-m", "unittest"]
        print(shlex.join(cmd))
        sys.exit(subprocess.call(cmd))
