/** Score-to-color ramp; the stops match the CLI's pixmap renderer so the
 *  browser view and the command-line images agree visually. */

type Rgb = [number, number, number];

const STOPS: Array<[number, Rgb]> = [
  [0.0, [10, 10, 40]],
  [0.5, [200, 50, 30]],
  [1.0, [255, 240, 170]],
];

export function rampColor(score: number): Rgb {
  const s = Math.min(Math.max(score, 0), 1);
  for (let i = 0; i < STOPS.length - 1; i++) {
    const [t0, c0] = STOPS[i];
    const [t1, c1] = STOPS[i + 1];
    if (s <= t1) {
      const f = (s - t0) / (t1 - t0);
      return [0, 1, 2].map((k) => Math.round(c0[k] + f * (c1[k] - c0[k]))) as Rgb;
    }
  }
  return STOPS[STOPS.length - 1][1];
}

export function rampCss(score: number): string {
  const [r, g, b] = rampColor(score);
  return `rgb(${r},${g},${b})`;
}
