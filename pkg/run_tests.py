#!/usr/bin/env python3
"""
Test runner script for effham.

This script provides convenient commands to run different types of tests.
"""

import argparse
import os
import subprocess
import sys
from pathlib import Path


def run_command(cmd, description):
    """Run a command and handle the output."""
    print(f"\n{description}")
    print("=" * 50)

    try:
        result = subprocess.run(cmd, check=False)
        if result.returncode == 0:
            print(f"{description} completed successfully")
        else:
            print(f"{description} failed with return code {result.returncode}")
        return result.returncode == 0
    except OSError as e:
        print(f"Error running {description}: {e}")
        return False


def main():
    """Main test runner function."""
    parser = argparse.ArgumentParser(description="effham test runner")
    parser.add_argument(
        "test_type",
        nargs="?",
        default="all",
        choices=["all", "unit", "integration", "fast", "slow", "symbolic"],
        help="Type of tests to run"
    )
    parser.add_argument(
        "--coverage",
        action="store_true",
        help="Run tests with coverage reporting (needs pytest-cov)"
    )
    parser.add_argument(
        "--verbose", "-v",
        action="store_true",
        help="Verbose output"
    )

    args = parser.parse_args()

    project_root = Path(__file__).parent
    os.chdir(project_root)

    print("effham test runner")
    print(f"Working directory: {project_root}")

    pytest_cmd = [sys.executable, "-m", "pytest"]

    if args.verbose:
        pytest_cmd.append("-v")

    if args.coverage:
        pytest_cmd += ["--cov=effham", "--cov-report=html", "--cov-report=term"]

    if args.test_type == "unit":
        pytest_cmd += ["-m", "unit"]
    elif args.test_type == "integration":
        pytest_cmd += ["-m", "integration"]
    elif args.test_type == "fast":
        pytest_cmd += ["-m", "not slow"]
    elif args.test_type == "slow":
        pytest_cmd += ["-m", "slow"]
    elif args.test_type == "symbolic":
        pytest_cmd += ["tests/integration/test_symbolic_numeric.py", "tests/unit/test_expr.py"]
    else:
        pytest_cmd.append("tests/")

    success = run_command(pytest_cmd, f"Running {args.test_type} tests")

    if success:
        print("\nAll tests passed!")
        if args.coverage:
            print("Coverage report generated in htmlcov/index.html")
    else:
        print("\nSome tests failed. Check the output above.")
        sys.exit(1)


if __name__ == "__main__":
    main()
