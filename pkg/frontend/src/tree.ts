/* Text views of abduction results: the depth-3 interpretation tree the
 * workbench uses everywhere (root, one node per predicate/arity, one leaf
 * per atom) and the +/- diff listing. */

import { DiffResult } from "./types.js";

interface AtomShape {
    name: string;
    arity: number;
}

/* Predicate and arity of a canonical atom string.  Arguments may nest
 * parentheses and contain quoted strings with escapes. */
export function atomShape(atom: string): AtomShape {
    const signless = atom.startsWith("-") ? atom.slice(1) : atom;
    const open = signless.indexOf("(");
    if (open < 0) {
        return { name: signless, arity: 0 };
    }
    const name = signless.slice(0, open);
    let depth = 0;
    let inString = false;
    let arity = 1;
    for (let i = open; i < signless.length; i++) {
        const ch = signless[i];
        if (inString) {
            if (ch === "\\") {
                i += 1;
            } else if (ch === '"') {
                inString = false;
            }
        } else if (ch === '"') {
            inString = true;
        } else if (ch === "(") {
            depth += 1;
        } else if (ch === ")") {
            depth -= 1;
        } else if (ch === "," && depth === 1) {
            arity += 1;
        }
    }
    return { name, arity };
}

export function treeLines(atoms: string[], label: string): string[] {
    const groups = new Map<string, { shape: AtomShape; atoms: string[] }>();
    for (const atom of atoms) {
        const shape = atomShape(atom);
        const key = `${shape.name}/${shape.arity}`;
        const group = groups.get(key);
        if (group) {
            group.atoms.push(atom);
        } else {
            groups.set(key, { shape, atoms: [atom] });
        }
    }
    const ordered = [...groups.values()].sort((a, b) => {
        if (a.shape.name !== b.shape.name) {
            return a.shape.name < b.shape.name ? -1 : 1;
        }
        return a.shape.arity - b.shape.arity;
    });
    const lines = [`I ${label}`];
    for (const group of ordered) {
        lines.push(`  P ${group.shape.name}/${group.shape.arity}`);
        for (const atom of group.atoms) {
            lines.push(`    L ${atom}`);
        }
    }
    return lines;
}

export function diffLines(diff: DiffResult): string[] {
    return [
        ...diff.only_left.map((atom) => `- ${atom}`),
        ...diff.only_right.map((atom) => `+ ${atom}`),
    ];
}
