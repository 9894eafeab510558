"""
Smoke tests for the simplicial Kan engine.

Exercises nerves, Kan classification, filtrations, bibundles, décalage and
discrete jets on the smallest instances.
"""

import sys
from pathlib import Path

# Add repo root to path
sys.path.insert(0, str(Path(__file__).parent))


def test_nerves():
    """Test nerves and their sizes."""
    print("Testing nerves...")

    try:
        from src.groupoids.categories import cyclic_group, poset_category
        from src.simplicial.shapes import simplex

        X = simplex(2)
        assert X.sizes(2) == [3, 6, 10], f"Expected sizes [3, 6, 10], got {X.sizes(2)}"
        print(f"  PASS: simplex(2) sizes {X.sizes(2)}")

        N = cyclic_group(2).as_groupoid().nerve()
        assert N.sizes(2) == [1, 2, 4], f"Expected sizes [1, 2, 4], got {N.sizes(2)}"
        print(f"  PASS: N(Z/2) sizes {N.sizes(2)}")

        P = poset_category(2).nerve()
        assert P.size(1) == 3, f"Expected 3 arrows in [1], got {P.size(1)}"
        print(f"  PASS: N([1]) has {P.size(1)} edges")

        return True
    except Exception as e:
        print(f"  FAIL: Error: {e}")
        import traceback
        traceback.print_exc()
        return False


def test_kan_classification():
    """Test Kan profiles."""
    print("\nTesting Kan classification...")

    try:
        from src.groupoids.categories import cyclic_group
        from src.kan.profile import classify_object
        from src.simplicial.shapes import simplex

        flags = classify_object(cyclic_group(2).as_groupoid().nerve()).flags()
        assert flags['kan_complex'], "N(Z/2) should be Kan"
        assert flags['groupoid_level'] == 1, f"Expected level 1, got {flags['groupoid_level']}"
        print(f"  PASS: N(Z/2): {flags}")

        flags = classify_object(simplex(1)).flags()
        assert flags['inner_kan_complex'] and not flags['kan_complex'], "Delta^1 is inner Kan only"
        print("  PASS: Delta^1 is inner Kan but not Kan")

        return True
    except Exception as e:
        print(f"  FAIL: Error: {e}")
        import traceback
        traceback.print_exc()
        return False


def test_filtrations():
    """Test filtration search."""
    print("\nTesting filtrations...")

    try:
        from src.errors import NotFound
        from src.extensions.filtrations import find_filtration, verify_certificate
        from src.simplicial.shapes import boundary, horn, inclusion, simplex

        i = inclusion(horn(2, 1), simplex(2))
        cert = find_filtration(i, "inner")
        ok, _ = verify_certificate(cert, i)
        assert ok, "certificate should replay"
        print(f"  PASS: Lambda^2_1 -> Delta^2 in {len(cert.steps)} step(s)")

        try:
            find_filtration(inclusion(boundary(2), simplex(2)), "inner")
            print("  FAIL: boundary inclusion admitted an inner filtration")
            return False
        except NotFound:
            print("  PASS: boundary inclusion has no inner filtration")

        return True
    except Exception as e:
        print(f"  FAIL: Error: {e}")
        import traceback
        traceback.print_exc()
        return False


def test_bibundles():
    """Test bundlisation and cographs."""
    print("\nTesting bibundles...")

    try:
        from src.bibundles.colored import higher_cograph
        from src.bibundles.report import classify_bibundle
        from src.cli.corpus import group_extension
        from src.groupoids.bibundles import bundlisation

        F = group_extension()
        P = bundlisation(F)
        assert P.right_principal().principal, "bundlisation should be right principal"
        print(f"  PASS: bundlisation of {F.name} is right principal")

        report = classify_bibundle(higher_cograph(F.nerve_map()), 1)
        assert report.bibundle, "cograph should be a bibundle"
        print(f"  PASS: cograph flags {report.flags()}")

        return True
    except Exception as e:
        print(f"  FAIL: Error: {e}")
        import traceback
        traceback.print_exc()
        return False


def test_decalage():
    """Test décalage."""
    print("\nTesting décalage...")

    try:
        from src.groupoids.categories import cyclic_group
        from src.kan.profile import classify_map
        from src.simplicial.constructions import decalage

        D, pi, kappa = decalage(cyclic_group(2).as_groupoid().nerve())
        assert classify_map(pi).is_kan, "pi should be a Kan fibration"
        assert classify_map(kappa).is_acyclic, "kappa should be acyclic"
        print(f"  PASS: {D.name} sizes {D.sizes(2)}")

        return True
    except Exception as e:
        print(f"  FAIL: Error: {e}")
        import traceback
        traceback.print_exc()
        return False


def test_jets():
    """Test discrete jets."""
    print("\nTesting discrete jets...")

    try:
        from src.differentiation.jets import discrete_jet
        from src.differentiation.pair_nerve import PointedFinSet
        from src.groupoids.categories import cyclic_group

        result = discrete_jet(cyclic_group(2).as_groupoid().nerve(), PointedFinSet.of_size(3))
        assert result.stabilized_at == 1, f"Expected stage 1, got {result.stabilized_at}"
        assert result.verified, "jet should match Hom(P(S), X)"
        print(f"  PASS: jet stabilised at {result.stabilized_at} with {result.oracle_size} elements")

        return True
    except Exception as e:
        print(f"  FAIL: Error: {e}")
        import traceback
        traceback.print_exc()
        return False


def test_config_loading():
    """Test configuration loading."""
    print("\nTesting configuration...")

    try:
        from src.config import config_value

        assert config_value('format_version') == "0.2", "format_version should be 0.2"
        assert config_value('scan.extra_levels') == 1, "scan.extra_levels should be 1"
        print("  PASS: engine.yaml loaded")

        return True
    except Exception as e:
        print(f"  FAIL: Error: {e}")
        import traceback
        traceback.print_exc()
        return False


def main():
    """Run all tests."""
    print("="*60)
    print("Simplicial Kan Engine - Smoke Tests")
    print("="*60)

    results = []
    results.append(("Nerves", test_nerves()))
    results.append(("Kan Classification", test_kan_classification()))
    results.append(("Filtrations", test_filtrations()))
    results.append(("Bibundles", test_bibundles()))
    results.append(("Décalage", test_decalage()))
    results.append(("Discrete Jets", test_jets()))
    results.append(("Config Loading", test_config_loading()))

    print("\n" + "="*60)
    print("Test Summary:")
    print("="*60)

    passed = sum(1 for _, result in results if result)
    total = len(results)

    for name, result in results:
        status = "PASS" if result else "FAIL"
        print(f"  {status}: {name}")

    print(f"\nTotal: {passed}/{total} tests passed")

    if passed == total:
        print("\nAll tests passed.")
        return 0
    else:
        print("\nSome tests failed. Check output above.")
        return 1


if __name__ == "__main__":
    sys.exit(main())
