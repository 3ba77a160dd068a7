"""Poisson emergency events, vital-sign bands and the sensing schedule.

Each node sees Poisson(lambda) emergencies per round; every emergency is a
threshold crossing of that node's vital band. Routine readings follow the
per-kind schedule (blood pressure every 3 hours, glucose three times a day,
ECG weekly) with one round equal to one hour.
"""
import numpy as np

from wbansim.core import SensorKind
from wbansim.events import (SensingSchedule, VitalThresholds, is_critical,
                            is_scheduled, poisson_pmf, sample_event_count,
                            sample_reading)

lam = 0.1
print(f"event counts per round per node, lambda={lam}:")
for k in range(4):
    print(f"  P(k={k}) = {poisson_pmf(lam, k):.6f}")

g = np.random.Generator(np.random.PCG64(1))
draws = [sample_event_count(lam, g) for _ in range(50000)]
print(f"  empirical mean over 50k draws: {np.mean(draws):.4f}")

t = VitalThresholds()
print("\ncriticality checks against the vital bands:")
for kind, reading in ((SensorKind.HEART_RATE, 75.0),
                      (SensorKind.HEART_RATE, 112.0),
                      (SensorKind.TEMPERATURE, 40.0),
                      (SensorKind.GLUCOSE, 130.0),
                      (SensorKind.BLOOD_PRESSURE, (150.0, 85.0))):
    flag = "CRITICAL" if is_critical(kind, reading, t) else "normal"
    print(f"  {kind.value:15s} {str(reading):>14s} -> {flag}")

print("\nsynthetic readings stay consistent with their criticality flag:")
for critical in (False, True):
    vals = [sample_reading(SensorKind.HEART_RATE, critical, t, g) for _ in range(5)]
    assert all(is_critical(SensorKind.HEART_RATE, v, t) == critical for v in vals)
    print(f"  critical={critical!s:5s}: " + ", ".join(f"{v:.1f}" for v in vals) + " bpm")

s = SensingSchedule()
print("\nscheduled sensing periods (rounds, 1 round = 1 hour):")
for kind in (SensorKind.BLOOD_PRESSURE, SensorKind.GLUCOSE, SensorKind.INSULIN,
             SensorKind.ECG, SensorKind.EMG):
    due = [r for r in range(200) if is_scheduled(kind, r, s)][:4]
    print(f"  {kind.value:15s} period {s.periods[kind]:4d}, due at rounds {due}")
