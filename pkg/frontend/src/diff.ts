/** Display-only line alignment for the two panes: lines outside the longest
 * common subsequence get flagged. Independent of any server-side diffing. */

export type LineMark = "same" | "changed";

export interface SideBySideDiff {
  left: LineMark[];
  right: LineMark[];
}

const MAX_LINES = 400; // display cap keeps the O(n*m) table cheap

export function diffLines(leftText: string, rightText: string): SideBySideDiff {
  const left = leftText.split("\n").slice(0, MAX_LINES);
  const right = rightText.split("\n").slice(0, MAX_LINES);
  const n = left.length;
  const m = right.length;
  const table: number[][] = Array.from({ length: n + 1 }, () => new Array(m + 1).fill(0));
  for (let i = n - 1; i >= 0; i--) {
    for (let j = m - 1; j >= 0; j--) {
      table[i][j] =
        left[i] === right[j]
          ? table[i + 1][j + 1] + 1
          : Math.max(table[i + 1][j], table[i][j + 1]);
    }
  }
  const leftMarks: LineMark[] = new Array(n).fill("changed");
  const rightMarks: LineMark[] = new Array(m).fill("changed");
  let i = 0;
  let j = 0;
  while (i < n && j < m) {
    if (left[i] === right[j]) {
      leftMarks[i] = "same";
      rightMarks[j] = "same";
      i++;
      j++;
    } else if (table[i + 1][j] >= table[i][j + 1]) {
      i++;
    } else {
      j++;
    }
  }
  return { left: leftMarks, right: rightMarks };
}
