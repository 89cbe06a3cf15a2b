# Environmental what-ifs: clock-speed and OS word-size effects on predicted RT.
#
# Run: python demos/06_environment_whatif.py

from swphm import (
    EnvAdjustment,
    EnvironmentSpec,
    adjust_clock_speed,
    apply_env,
    estimate_os_factor,
)

# each 10% clock-speed increase buys a mean 12.27% RT decrease
print("clock-speed rule (coefficient 1.227):")
for hz_new in (1.98, 2.0, 2.4):
    rt = adjust_clock_speed(10_000.0, 1.8, hz_new)
    print(f"  1.8 GHz -> {hz_new} GHz: 10000 ms -> {rt:7.1f} ms")

# the rule is linear and calibrated on modest steps; huge jumps refuse
try:
    adjust_clock_speed(10_000.0, 1.0, 2.5)
except Exception as exc:
    print(f"  1.0 GHz -> 2.5 GHz: {exc}")

# the 32-bit/64-bit factor comes from paired measurements of the same release
pairs = [(12_000.0, 10_000.0), (13_400.0, 10_500.0), (11_800.0, 9_900.0)]
factor = estimate_os_factor(pairs)
print(f"\nOS factor (mean rt32/rt64 over {len(pairs)} paired releases): {factor:.4f}")

adj = EnvAdjustment(os_factor_32_over_64=factor)
slow = EnvironmentSpec(os_bits=32, clock_ghz=1.8)
fast = EnvironmentSpec(os_bits=64, clock_ghz=2.4)
rt = 9_500.0
print(f"\ncombined upgrade 32-bit/1.8 GHz -> 64-bit/2.4 GHz:")
print(f"  {rt:.0f} ms -> {apply_env(rt, slow, fast, adj):.1f} ms")
print(f"  (OS factor first, then the clock rule; same env is a no-op: "
      f"{apply_env(rt, slow, slow, adj):.0f} ms)")
