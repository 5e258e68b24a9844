// Color conversions and blending.
export type Rgb = [number, number, number];
export type Hsl = [number, number, number];

const clamp = (x: number, lo = 0, hi = 1): number => Math.min(hi, Math.max(lo, x));

export const toHex = ([r, g, b]: Rgb): string =>
  "#" + [r, g, b].map((c) => Math.round(clamp(c) * 255).toString(16).padStart(2, "0")).join("");

export const fromHex = (hex: string): Rgb =>
  [0, 2, 4].map((i) => parseInt(hex.replace("#", "").slice(i, i + 2), 16) / 255) as Rgb;

export const luminance = ([r, g, b]: Rgb): number =>
  [r, g, b]
    .map((c) => (c <= 0.03928 ? c / 12.92 : Math.pow((c + 0.055) / 1.055, 2.4)))
    .reduce((acc, c, i) => acc + c * [0.2126, 0.7152, 0.0722][i], 0);

export const contrast = (a: Rgb, b: Rgb): number =>
  (Math.max(luminance(a), luminance(b)) + 0.05) / (Math.min(luminance(a), luminance(b)) + 0.05);

export const toHsl = ([r, g, b]: Rgb): Hsl => {
  const max = Math.max(r, g, b), min = Math.min(r, g, b), l = (max + min) / 2;
  const d = max - min;
  const s = d === 0 ? 0 : d / (1 - Math.abs(2 * l - 1));
  const h =
    d === 0 ? 0
    : max === r ? ((g - b) / d + (g < b ? 6 : 0)) * 60
    : max === g ? ((b - r) / d + 2) * 60
    : ((r - g) / d + 4) * 60;
  return [h, s, l];
};

export const fromHsl = ([h, s, l]: Hsl): Rgb => {
  const k = (n: number) => (n + h / 30) % 12;
  const a = s * Math.min(l, 1 - l);
  const f = (n: number) => l - a * Math.max(-1, Math.min(k(n) - 3, Math.min(9 - k(n), 1)));
  return [f(0), f(8), f(4)];
};

export const mix = (a: Rgb, b: Rgb, t: number): Rgb =>
  [0, 1, 2].map((i) => a[i] + (b[i] - a[i]) * clamp(t)) as Rgb;

export const lighten = (c: Rgb, amount: number): Rgb =>
  ((hsl) => fromHsl([hsl[0], hsl[1], clamp(hsl[2] + amount)]))(toHsl(c));

export const readableOn = (bg: Rgb): Rgb =>
  contrast(bg, [1, 1, 1]) >= contrast(bg, [0, 0, 0]) ? [1, 1, 1] : [0, 0, 0];

export const gradient = (stops: Rgb[], n: number): Rgb[] =>
  Array.from({ length: n }, (_, i) => {
    const t = (i / Math.max(1, n - 1)) * (stops.length - 1);
    const j = Math.min(stops.length - 2, Math.floor(t));
    return mix(stops[j], stops[j + 1], t - j);
  });
