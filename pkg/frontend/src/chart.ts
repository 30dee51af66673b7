// Pure bar-chart layout: aggregate points in, pixel rectangles out.
// Rendering (SVG or canvas) is the caller's concern.

import type { AggregatePoint } from "./api.js";

export interface Bar {
  key: string;
  value: number;
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface BarLayout {
  bars: Bar[];
  baseline: number;
}

const GAP_FRACTION = 0.2;

export function computeBars(
  points: AggregatePoint[],
  width: number,
  height: number,
): BarLayout {
  if (width <= 0 || height <= 0) {
    throw new RangeError("chart area must be positive");
  }
  if (points.length === 0) {
    return { bars: [], baseline: height };
  }
  // the value axis always includes zero so bar length is proportional to value
  let low = 0;
  let high = 0;
  for (const point of points) {
    if (point.value < low) low = point.value;
    if (point.value > high) high = point.value;
  }
  const span = high - low;
  const scale = span === 0 ? 0 : height / span;
  const baseline = high * scale;

  const slot = width / points.length;
  const gap = slot * GAP_FRACTION;
  const barWidth = slot - gap;

  const bars = points.map((point, index) => {
    const length = Math.abs(point.value) * scale;
    return {
      key: point.key,
      value: point.value,
      x: index * slot + gap / 2,
      y: point.value >= 0 ? baseline - length : baseline,
      width: barWidth,
      height: length,
    };
  });
  return { bars, baseline };
}
