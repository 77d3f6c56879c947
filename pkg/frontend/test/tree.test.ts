import { describe, expect, it } from "vitest";

import { atomShape, diffLines, treeLines } from "../src/tree.js";

describe("atomShape", () => {
    it("splits predicate and arity", () => {
        expect(atomShape("q(1,2)")).toEqual({ name: "q", arity: 2 });
        expect(atomShape("p")).toEqual({ name: "p", arity: 0 });
        expect(atomShape("edge(a,b,3)")).toEqual({ name: "edge", arity: 3 });
    });

    it("keeps the strong negation sign out of the name", () => {
        expect(atomShape("-q(1,2)")).toEqual({ name: "q", arity: 2 });
        expect(atomShape("-p")).toEqual({ name: "p", arity: 0 });
    });

    it("sees through nested terms and quoted strings", () => {
        expect(atomShape("e(f(1,2),3)")).toEqual({ name: "e", arity: 2 });
        expect(atomShape('say("a,b",2)')).toEqual({ name: "say", arity: 2 });
        expect(atomShape('m("a\\",b")')).toEqual({ name: "m", arity: 1 });
        expect(atomShape("wrap(g(h(x)))")).toEqual({ name: "wrap", arity: 1 });
    });
});

describe("treeLines", () => {
    it("prints root, predicate groups, then leaves", () => {
        const atoms = ["q(1,2)", "q(2,4)", "q(3,1)", "q(4,3)"];
        expect(treeLines(atoms, "q4")).toEqual([
            "I q4",
            "  P q/2",
            "    L q(1,2)",
            "    L q(2,4)",
            "    L q(3,1)",
            "    L q(4,3)",
        ]);
    });

    it("orders groups by name then arity, leaves in given order", () => {
        const atoms = ["q(1)", "p(2,3)", "p(9)", "-p(1)", "p(4)"];
        expect(treeLines(atoms, "m")).toEqual([
            "I m",
            "  P p/1",
            "    L p(9)",
            "    L -p(1)",
            "    L p(4)",
            "  P p/2",
            "    L p(2,3)",
            "  P q/1",
            "    L q(1)",
        ]);
    });

    it("handles the empty interpretation", () => {
        expect(treeLines([], "void")).toEqual(["I void"]);
    });
});

describe("diffLines", () => {
    it("lists removals then additions", () => {
        const diff = {
            only_left: ["q(2,4)"],
            only_right: ["q(2,3)"],
            common: ["q(1,2)", "q(3,1)", "q(4,3)"],
        };
        expect(diffLines(diff)).toEqual(["- q(2,4)", "+ q(2,3)"]);
    });

    it("is empty when nothing changed", () => {
        expect(diffLines({ only_left: [], only_right: [], common: ["a"] }))
            .toEqual([]);
    });
});
