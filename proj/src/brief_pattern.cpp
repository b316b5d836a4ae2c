#include "mmvpr/bow.hpp"

namespace mmvpr {

// Format version 1. Offsets were drawn once from an isotropic Gaussian with
// sigma = 31/5 over the 31x31 patch (clamped to [-15, 15], degenerate pairs
// redrawn) and are frozen here; persisted vocabularies depend on them.
const std::array<BriefPair, 256>& brief_pattern() {
    static const std::array<BriefPair, 256> kPattern = {{
    {-9, 1, -5, 5}, {-7, -7, 0, 4}, {-3, 12, 10, 1}, {-3, 4, 11, 5},
    {-4, 9, 5, 0}, {-6, -4, -3, 12}, {-14, -4, 5, 2}, {12, -2, -1, 5},
    {2, -8, -1, -4}, {6, 8, 5, -8}, {9, -4, -1, 3}, {-5, 8, -14, 5},
    {5, 2, -9, -5}, {5, 12, -10, 1}, {-4, -7, 4, -6}, {-5, -2, -8, -5},
    {-4, 1, 0, -9}, {3, 5, 11, -7}, {2, -11, 3, 1}, {9, -15, 15, 6},
    {-4, 0, 5, 3}, {-5, -3, 1, 0}, {2, -7, -7, -2}, {9, -4, -7, -8},
    {-9, 10, 2, -9}, {4, 6, 2, 3}, {0, -6, -6, -8}, {8, 0, 6, 2},
    {-6, -11, -11, 4}, {10, 2, -1, -5}, {2, 10, -5, -3}, {-7, -8, 2, -6},
    {-5, -2, 5, -1}, {-3, 4, 1, -2}, {-12, 6, 2, -5}, {1, 5, -4, 3},
    {-9, 7, 3, 3}, {-8, -6, 1, 2}, {3, 4, -11, 2}, {-6, -9, 7, 9},
    {0, -4, -2, 1}, {4, -3, 7, 7}, {0, 5, 8, -2}, {-6, -10, 9, 4},
    {-4, -1, -7, 7}, {0, -12, 0, 6}, {3, 6, 1, 0}, {-1, 1, 2, -5},
    {-3, -7, -2, -3}, {5, -3, 1, 1}, {-11, -9, 4, -13}, {0, 3, -6, -4},
    {4, 5, 8, 0}, {4, -7, -2, -6}, {5, 4, 8, 4}, {0, 3, 9, 8},
    {6, 5, 10, 14}, {1, 2, 5, -9}, {1, -4, 5, -4}, {9, -11, -2, 2},
    {-9, -7, -4, -6}, {8, 10, 5, 3}, {-4, -5, 1, 0}, {-6, 15, -6, -8},
    {-12, -4, 4, 12}, {10, 9, -2, 5}, {-9, 4, 3, 2}, {-6, -2, -11, -1},
    {0, 2, 3, -5}, {-7, -8, -1, 6}, {11, -4, -4, -5}, {8, 5, 7, 6},
    {-1, 7, -10, -2}, {1, -11, 3, 0}, {9, 8, 10, -7}, {4, -4, 2, -6},
    {2, 5, 2, 7}, {5, -2, 5, -8}, {-4, 10, 2, -12}, {-2, 0, -9, 1},
    {-1, 0, 4, -13}, {-1, -4, -3, -1}, {1, 6, -13, -4}, {3, -1, -1, 1},
    {1, 4, -5, -8}, {-4, -8, 4, 0}, {-1, 1, 4, 6}, {11, 9, 5, -2},
    {-3, -1, -2, 9}, {5, 6, 3, 0}, {3, 5, -6, -4}, {-8, -7, 12, 1},
    {6, -4, 6, -2}, {-11, -4, 8, -5}, {-6, -3, 3, -3}, {-1, 2, 2, -3},
    {2, 10, -9, 15}, {-2, -4, -11, -6}, {5, 2, -3, 6}, {-1, -3, -7, 5},
    {-3, 4, 13, -3}, {-4, 3, -2, 12}, {4, -2, 8, 6}, {-2, 5, 11, 7},
    {6, -8, 6, 1}, {-12, 0, -9, 0}, {0, 6, -2, 2}, {2, -5, -5, 9},
    {-2, 7, -6, 4}, {-1, 5, 5, 1}, {-8, 5, 4, 3}, {-1, -6, -2, -2},
    {-10, 10, 0, 4}, {0, 0, 1, -9}, {-3, 15, 4, -5}, {-6, -3, -1, -5},
    {-8, -3, -6, 5}, {6, -8, 1, -7}, {-3, 5, -13, -5}, {4, 1, 2, 13},
    {-2, -5, 2, -2}, {11, -1, 1, 4}, {4, -8, -4, -2}, {1, -1, -1, 6},
    {2, -9, -13, -2}, {0, -1, 4, -9}, {9, 4, -3, 0}, {-15, 12, -5, -9},
    {-9, 8, 5, -2}, {8, 12, 8, -3}, {-1, 1, 5, 2}, {0, -12, -4, -15},
    {9, -8, 8, 0}, {-13, -4, -15, 5}, {-4, -3, 3, 0}, {15, -12, 11, -1},
    {0, 2, -7, 0}, {-7, -5, -4, -1}, {-9, -2, -4, 5}, {5, 7, 7, 1},
    {9, -13, -2, -6}, {1, 10, 2, -2}, {-1, -15, 7, 7}, {8, 10, -4, 1},
    {3, 2, -4, 2}, {-3, -2, 5, -14}, {6, -4, 3, -7}, {-10, 11, 4, 8},
    {-7, 10, -2, -4}, {1, 6, -1, 15}, {-3, 1, 4, 10}, {6, -2, 5, -15},
    {-11, -4, 5, 9}, {8, 4, -1, -8}, {-6, 0, 6, 0}, {-9, -15, 7, 10},
    {-2, 1, 0, 15}, {-9, -11, -10, 7}, {-3, 8, -9, -2}, {0, -1, -6, 10},
    {0, -15, 3, -8}, {4, 4, -4, -9}, {-5, -3, 2, 7}, {6, 5, -5, 3},
    {0, -2, 4, -8}, {7, -2, 1, -1}, {10, -8, -3, 5}, {10, -2, 1, 0},
    {3, 10, 6, 7}, {-7, 9, 3, -5}, {-2, 0, -12, -6}, {4, 3, -10, 6},
    {3, 8, -2, 1}, {2, 0, 5, -7}, {-4, -1, 0, -3}, {0, 1, 0, -4},
    {-7, 6, -12, -3}, {-5, 8, 2, -1}, {-2, 8, 0, -5}, {5, 12, -4, -6},
    {3, 3, 5, -4}, {3, -2, 2, -13}, {-3, -1, 5, 4}, {-1, 3, -9, -3},
    {-4, -4, -7, 8}, {-3, 0, 10, 15}, {-4, 8, 4, 3}, {8, -3, 2, -3},
    {-5, -5, 1, 4}, {-2, -7, 0, -15}, {8, 3, -2, -5}, {8, -11, 14, 2},
    {1, -6, 9, 0}, {3, 7, -8, -4}, {15, -9, 8, 4}, {-2, -3, -11, 0},
    {4, -4, -6, -1}, {-3, 9, -8, 3}, {-7, -2, -7, -15}, {-6, 4, -4, -6},
    {0, 0, 3, 3}, {-3, -2, -4, -2}, {-10, -5, -6, 10}, {7, -2, 0, -7},
    {-2, 1, 2, -2}, {0, 12, 5, 0}, {12, -2, 1, -2}, {6, -2, 2, 3},
    {-5, 8, -1, -4}, {9, 2, -3, -9}, {1, 4, -3, 0}, {7, 4, -3, -1},
    {-15, -11, -6, -10}, {1, 3, 2, -7}, {-1, 5, 4, -2}, {4, 3, -2, -1},
    {10, -1, 2, 1}, {5, 8, 5, -1}, {-15, 1, -10, 0}, {-6, -7, -2, -6},
    {-2, 0, 2, -1}, {0, 4, 2, 9}, {9, -7, 1, 6}, {0, -2, -3, 13},
    {-5, -13, -10, -12}, {-7, 12, -8, -2}, {3, 3, 1, -1}, {-2, 8, -5, -1},
    {2, 0, -5, 9}, {-3, 3, 0, 4}, {5, 0, 15, 5}, {5, -9, 6, -5},
    {-10, 14, 1, 1}, {-4, 1, -7, -4}, {-2, 12, 10, 3}, {-2, -2, -2, 2},
    {15, 3, -3, 0}, {4, -2, 9, 1}, {-4, 6, -10, 2}, {1, 11, 1, -10},
    {4, 7, 0, 10}, {1, 7, -2, 9}, {3, 0, 10, -6}, {10, 5, 4, 4},
    {-6, 11, -8, -4}, {11, 8, -1, 12}, {-1, -1, -11, 6}, {-6, 7, 0, -6},
    {2, 0, -6, -8}, {7, -1, -3, -7}, {13, 7, 10, 3}, {2, 4, -1, -7},
    {3, 7, -10, 1}, {7, -1, 0, 7}, {-3, 1, -2, 6}, {1, -1, -9, -9},
    }};
    return kPattern;
}

}  // namespace mmvpr
