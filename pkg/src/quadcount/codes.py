"""Names and index layouts for 3- and 4-vertex subgraph types and vertex orbits.

Only labels live here. Classification logic is kept separately by the
counting pipeline and by the brute-force oracle so the two stay independent.
"""

# induced 3-vertex types: empty, one edge, wedge, triangle
TYPES3 = ("H0", "H1", "H2", "H3")

# per-vertex roles inside a 3-subset
ORBITS3 = ("H0", "H1e", "H1d", "H2c", "H2e", "H3")

# induced 4-vertex types, F0 (empty) .. F10 (clique)
TYPES4 = tuple(f"F{i}" for i in range(11))

ORBITS4 = (
    "F0",
    "F1_E", "F1_I",
    "F2",
    "F3_E", "F3_C", "F3_I",
    "F4_E", "F4_M",
    "F5_T", "F5_I",
    "F6_L", "F6_H",
    "F7",
    "F8_P", "F8_H", "F8_T",
    "F9_2", "F9_3",
    "F10",
)

ORBIT_INDEX = {name: i for i, name in enumerate(ORBITS4)}

# type index for every orbit column
ORBIT_TYPE = tuple(int(name.split("_")[0][1:]) for name in ORBITS4)

# the 16 orbits reachable from the local equation system, in solve-vector order
CONNECTED_ORBITS = (
    "F1_E", "F2", "F3_E", "F3_C", "F4_E", "F4_M", "F5_T", "F6_L",
    "F6_H", "F7", "F8_P", "F8_H", "F8_T", "F9_2", "F9_3", "F10",
)

# orbits with v outside the edges of the subgraph, filled in by complement counting
ISOLATED_ORBITS = ("F0", "F1_I", "F3_I", "F5_I")

ORBIT3_INDEX = {name: i for i, name in enumerate(ORBITS3)}
