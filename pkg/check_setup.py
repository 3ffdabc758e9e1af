"""
Diagnostics script - checks configuration, dependencies, fixtures and the run ledger
"""
import os
import sys
from dotenv import load_dotenv

# Add project root to path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

def check_environment():
    """Check environment variables"""
    load_dotenv()

    print("[*] ENVIRONMENT VARIABLES CHECK")
    print("=" * 50)

    try:
        from backend.config import get_settings
        settings = get_settings()
    except Exception as e:
        print(f"[X] Invalid configuration: {e}")
        return False

    for var in ('TELEPORT_FIXTURE_DIR', 'TELEPORT_DATABASE_URL', 'TELEPORT_LOG_LEVEL',
                'TELEPORT_DEFAULT_SHOTS', 'TELEPORT_DEFAULT_SEED'):
        value = os.getenv(var)
        print(f"[OK] {var}: {value}" if value else f"[-] {var}: default")

    print(f"   fixtures: {settings.fixture_dir}")
    print(f"   ledger:   {settings.database_url}")
    print(f"   shots:    {settings.default_shots}, seed: {settings.default_seed}")
    return True

def check_dependencies():
    """Check if required packages are installed"""
    print("\n[*] DEPENDENCIES CHECK")
    print("=" * 50)

    # Package name mapping: (display_name, import_name)
    required_packages = [
        ('numpy', 'numpy'),
        ('scipy', 'scipy'),
        ('pydantic', 'pydantic'),
        ('python-dotenv', 'dotenv'),
        ('fastapi', 'fastapi'),
        ('uvicorn', 'uvicorn'),
        ('sqlalchemy', 'sqlalchemy'),
    ]

    all_good = True
    for display_name, import_name in required_packages:
        try:
            __import__(import_name)
            print(f"[OK] {display_name}")
        except ImportError:
            print(f"[X] {display_name} - NOT INSTALLED")
            all_good = False

    return all_good

def check_fixtures():
    """Check bundled table rows and density matrices load"""
    print("\n[*] FIXTURES CHECK")
    print("=" * 50)

    try:
        from backend.compiler.verify import load_table_rows
        from backend.config import get_settings
        from backend.tomography.fixtures import hardware_fixtures

        rows = load_table_rows(get_settings().fixture_dir)
        print(f"[OK] Table rows: {len(rows)}")
        hardware_fixtures()
        print("[OK] Printed density matrices")
        return True
    except Exception as e:
        print(f"[X] Fixture error: {e}")
        return False

def check_database():
    """Check database connection and tables"""
    print("\n[*] DATABASE CHECK")
    print("=" * 50)

    try:
        from backend.database import engine
        from sqlalchemy import inspect

        inspector = inspect(engine)
        tables = inspector.get_table_names()

        if tables:
            print("[OK] Database connected")
            print(f"   Tables: {', '.join(tables)}")
        else:
            print("[!] Database connected but no tables found")
            print("   Run: python setup_db.py")

        return True
    except Exception as e:
        print(f"[X] Database error: {e}")
        return False

def main():
    print("\n" + "=" * 50)
    print("OPTIMAL TELEPORT - DIAGNOSTICS")
    print("=" * 50 + "\n")

    checks = [
        check_environment(),
        check_dependencies(),
        check_fixtures(),
        check_database(),
    ]

    print("\n" + "=" * 50)
    if all(checks):
        print("[OK] ALL CHECKS PASSED!")
        print("\nYou can now run:")
        print("   python -m backend.cli verify-table1")
        print("   uvicorn backend.main:app --reload")
    else:
        print("[X] SOME CHECKS FAILED")
        print("\nPlease fix the issues above first")
    print("=" * 50 + "\n")

if __name__ == "__main__":
    main()
