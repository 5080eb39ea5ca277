#!/usr/bin/env python3
"""
Test runner for the Q-Borel toolkit.
Runs the unit tests module by module and reports results.
"""

import os
import sys
import unittest
import argparse
import time

# tests/test_<name>.py, innermost layers first
MODULES = [
    'monomials', 'poset', 'qborel', 'decomposition', 'complexes',
    'resolutions', 'invariants', 'session', 'runner', 'cli', 'checks',
    'debug', 'acceptance',
]

# oracle sweeps over every poset and random ideal
SWEEPS = {'acceptance'}


def run_tests(verbose=False, pattern=None, modules=None, quick=False):
    """Run the selected test modules.

    Args:
        verbose: Whether to show verbose output
        pattern: Pattern to match test names
        modules: Names from MODULES to run (all by default)
        quick: Leave out the acceptance sweeps

    Returns:
        True if all tests pass, False otherwise
    """
    start_time = time.time()

    loader = unittest.TestLoader()
    if pattern:
        loader.testNamePatterns = [pattern]

    selected = [name for name in (modules or MODULES)
                if not (quick and name in SWEEPS)]
    tests_dir = os.path.join(os.path.dirname(__file__), 'tests')
    suite = unittest.TestSuite()
    for name in selected:
        suite.addTests(loader.discover(tests_dir, pattern=f'test_{name}.py',
                                       top_level_dir=os.path.dirname(
                                           tests_dir)))

    runner = unittest.TextTestRunner(verbosity=2 if verbose else 1)
    result = runner.run(suite)

    elapsed_time = time.time() - start_time

    print("\n" + "=" * 70)
    print("Test Summary:")
    print(f"  Modules: {', '.join(selected)}")
    print(f"  Ran {result.testsRun} tests in {elapsed_time:.2f} seconds")
    print(f"  Failures: {len(result.failures)}")
    print(f"  Errors: {len(result.errors)}")
    print(f"  Skipped: {len(result.skipped)}")
    print("=" * 70)

    return len(result.failures) == 0 and len(result.errors) == 0


def main():
    """Main function."""
    parser = argparse.ArgumentParser(
        description='Run the Q-Borel toolkit tests (closures, '
                    'decompositions, resolutions, sessions)'
    )
    parser.add_argument('-v', '--verbose', action='store_true',
                        help='Show verbose output')
    parser.add_argument('-p', '--pattern',
                        help='Pattern to match test names, e.g. *pdim*')
    parser.add_argument('-m', '--module', action='append', choices=MODULES,
                        help='Run only tests/test_<module>.py (repeatable)')
    parser.add_argument('-q', '--quick', action='store_true',
                        help='Skip the acceptance sweeps against the '
                             'Koszul and membership oracles')
    args = parser.parse_args()

    success = run_tests(verbose=args.verbose, pattern=args.pattern,
                        modules=args.module, quick=args.quick)
    sys.exit(0 if success else 1)


if __name__ == '__main__':
    main()
