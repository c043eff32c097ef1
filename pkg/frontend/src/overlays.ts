/**
 * Analytic reference curves drawn over simulated series.  Parameters come
 * from the provenance header of the series being overlaid (v0, tau); the
 * energy offset is the first value of the plotted column itself.
 */

const SQRT_PI = Math.sqrt(Math.PI);
const SQRT_HALF_PI = Math.sqrt(Math.PI / 2);

/** Strength where the white-noise branching law stops applying, (9/(2pi))^(1/4). */
export const WN_VALIDITY_VTILDE = (9 / (2 * Math.PI)) ** 0.25;

/** erf via the Abramowitz-Stegun rational fit; |error| < 1.5e-7. */
export function erf(x: number): number {
  const sign = x < 0 ? -1 : 1;
  const ax = Math.abs(x);
  const t = 1 / (1 + 0.3275911 * ax);
  const poly = t * (0.254829592 +
    t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
  return sign * (1 - poly * Math.exp(-ax * ax));
}

/** Integral of erf from 0 to z. */
function erfAntiderivative(z: number): number {
  return z * erf(z) + (Math.exp(-z * z) - 1) / SQRT_PI;
}

export interface OverlayParams {
  v0: number;
  tau: number;
  /** Value of the plotted column at its first sample. */
  y0: number;
}

export type OverlayKind = "wn_ek" | "rf_ek" | "wn_sigma2" | "free_sigma2";

export const OVERLAY_KINDS: OverlayKind[] = [
  "wn_ek", "rf_ek", "wn_sigma2", "free_sigma2",
];

export const OVERLAY_LABELS: Record<OverlayKind, string> = {
  wn_ek: "white noise",
  rf_ek: "random force",
  wn_sigma2: "white noise",
  free_sigma2: "free packet",
};

/** Evaluate an overlay at time t (simulation units). */
export function overlayValue(kind: OverlayKind, t: number, p: OverlayParams): number {
  switch (kind) {
    case "wn_ek":
      return p.y0 + SQRT_HALF_PI * p.v0 ** 2 * p.tau * t;
    case "rf_ek":
      return p.y0 + p.v0 ** 2 * p.tau ** 2 * SQRT_PI *
        erfAntiderivative(t / (p.tau * Math.SQRT2));
    case "wn_sigma2":
      return (Math.sqrt(2 * Math.PI) / 3) * p.v0 ** 2 * p.tau * t ** 3;
    case "free_sigma2":
      return (1 + t * t) / 2;
  }
}

export function parseOverlaySpec(spec: string): OverlayKind[] {
  const out: OverlayKind[] = [];
  for (const name of spec.split(",").map((s) => s.trim()).filter((s) => s !== "")) {
    if (!(OVERLAY_KINDS as string[]).includes(name)) {
      throw new Error(
        `unknown overlay '${name}' (choose from ${OVERLAY_KINDS.join(", ")})`,
      );
    }
    out.push(name as OverlayKind);
  }
  return out;
}
