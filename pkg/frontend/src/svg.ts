import type { Series } from "./aggregate.js";

const WIDTH = 640;
const HEIGHT = 420;
const MARGIN = { top: 42, right: 24, bottom: 48, left: 64 };

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

function tickLabel(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.01 && a < 10000) return String(Number(v.toPrecision(4)));
  return v.toExponential(1);
}

/** Render one metric (picked from each series by `pick`) against k.
 *  Every plotted point carries its aggregate value verbatim in a
 *  data-value attribute, so figures stay checkable against the CSV. */
export function renderFigure(
  series: Series[],
  pick: (s: Series) => number[],
  title: string,
  yLabel: string,
): string {
  const innerW = WIDTH - MARGIN.left - MARGIN.right;
  const innerH = HEIGHT - MARGIN.top - MARGIN.bottom;

  const allK = series.flatMap((s) => s.k);
  const allV = series.flatMap(pick);
  let kMin = Math.min(...allK);
  let kMax = Math.max(...allK);
  if (kMin === kMax) {
    kMin -= 1;
    kMax += 1;
  }
  const vMax = Math.max(...allV, 0) || 1;
  const yTop = vMax * 1.05;

  const sx = (k: number) => MARGIN.left + ((k - kMin) / (kMax - kMin)) * innerW;
  const sy = (v: number) => MARGIN.top + innerH - (v / yTop) * innerH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="15">${title}</text>`,
  );

  // axes
  const x0 = MARGIN.left;
  const y0 = MARGIN.top + innerH;
  parts.push(
    `<line x1="${x0}" y1="${y0}" x2="${x0 + innerW}" y2="${y0}" stroke="black"/>`,
  );
  parts.push(
    `<line x1="${x0}" y1="${MARGIN.top}" x2="${x0}" y2="${y0}" stroke="black"/>`,
  );
  parts.push(
    `<text x="${x0 + innerW / 2}" y="${HEIGHT - 10}" text-anchor="middle">k</text>`,
  );
  parts.push(
    `<text transform="rotate(-90)" x="${-(MARGIN.top + innerH / 2)}" y="16" ` +
      `text-anchor="middle">${yLabel}</text>`,
  );

  // y ticks
  for (let i = 0; i <= 5; i++) {
    const v = (yTop * i) / 5;
    const y = sy(v);
    parts.push(
      `<line x1="${x0 - 4}" y1="${y}" x2="${x0 + innerW}" y2="${y}" ` +
        `stroke="#ddd" stroke-width="0.6"/>`,
    );
    parts.push(
      `<text x="${x0 - 8}" y="${y + 4}" text-anchor="end">${tickLabel(v)}</text>`,
    );
  }
  // x ticks on the distinct k values
  for (const k of [...new Set(allK)].sort((a, b) => a - b)) {
    const x = sx(k);
    parts.push(
      `<line x1="${x}" y1="${y0}" x2="${x}" y2="${y0 + 4}" stroke="black"/>`,
    );
    parts.push(
      `<text x="${x}" y="${y0 + 18}" text-anchor="middle">${k}</text>`,
    );
  }

  series.forEach((s, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    const values = pick(s);
    const pts = s.k.map((k, i) => `${sx(k)},${sy(values[i])}`).join(" ");
    parts.push(
      `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="1.5"/>`,
    );
    s.k.forEach((k, i) => {
      parts.push(
        `<circle cx="${sx(k)}" cy="${sy(values[i])}" r="3" fill="${color}" ` +
          `data-series="${s.label}" data-k="${k}" data-value="${values[i]}"/>`,
      );
    });
  });

  // legend, top right
  const lx = x0 + innerW - 110;
  series.forEach((s, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    const ly = MARGIN.top + 14 + idx * 16;
    parts.push(
      `<line x1="${lx}" y1="${ly - 4}" x2="${lx + 22}" y2="${ly - 4}" ` +
        `stroke="${color}" stroke-width="2"/>`,
    );
    parts.push(`<text x="${lx + 28}" y="${ly}">${s.label}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n");
}
