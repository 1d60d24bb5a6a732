#!/usr/bin/env python3
"""
Quick test script to verify all imports work correctly.
"""
import importlib
import sys
import traceback

STEPS = [
    ("config", "config", ["settings", "configure", "configure_logging"]),
    ("models", "models", ["Alphabet", "CyclicWord", "RuleTableCA", "ProceduralCA"]),
    ("utils", "utils", ["parse_word", "format_word", "all_words"]),
    ("rule parser", "rule_parser", ["rule_parser", "load_rule_spec"]),
    ("services", "services.membership", ["decide_membership", "explain"]),
    ("commands", "commands", ["COMMAND_GROUPS"]),
    ("full application", "application", ["build_parser", "run"]),
]


def check_step(module_name: str, names) -> None:
    module = importlib.import_module(module_name)
    missing = [name for name in names if not hasattr(module, name)]
    if missing:
        raise ImportError(f"{module_name} is missing {', '.join(missing)}")


def test_imports_resolve():
    for _, module_name, names in STEPS:
        check_step(module_name, names)


def main() -> int:
    print("Testing imports...")
    print("=" * 50)
    for number, (label, module_name, names) in enumerate(STEPS, start=1):
        print(f"{number}. Testing {label} imports...")
        try:
            check_step(module_name, names)
        except Exception as e:
            print(f"   ❌ {label} import failed: {e}")
            traceback.print_exc()
            return 1
        print(f"   ✅ {label} imports successful")
    print("=" * 50)
    print("✅ All imports successful! The command line should run correctly.")
    print("=" * 50)
    return 0


if __name__ == '__main__':
    sys.exit(main())
