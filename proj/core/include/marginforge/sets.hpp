#pragma once

#include <variant>

#include "marginforge/core.hpp"

namespace marginforge::sets {

// Closed convex sets with exact closed-form projections. No iterative
// projections are admitted, so solver inner steps stay exact.

struct WholeSpace {
    int dim;
};

struct Ball {
    Vector center;
    double radius;
};

struct Box {
    Vector lower;
    Vector upper;
};

struct NonnegOrthant {
    int dim;
};

// { x : <normal, x> <= offset }
struct Halfspace {
    Vector normal;
    double offset;
};

// { x : <normal, x> + offset = 0 }
struct Hyperplane {
    Vector normal;
    double offset;
};

using ConvexSetSpec = std::variant<WholeSpace, Ball, Box, NonnegOrthant, Halfspace, Hyperplane>;

// Validating factories.
ConvexSetSpec whole_space(int dim);
ConvexSetSpec ball(Vector center, double radius);
ConvexSetSpec box(Vector lower, Vector upper);
ConvexSetSpec nonneg_orthant(int dim);
ConvexSetSpec halfspace(Vector normal, double offset);
ConvexSetSpec hyperplane(Vector normal, double offset);

int dim(const ConvexSetSpec& s);
bool is_whole_space(const ConvexSetSpec& s);

// Nearest point of the set. The hyperplane case uses the signed form
// x - ((<n,x>+b)/||n||^2) n, which is correct on both sides of the plane.
Vector project(const ConvexSetSpec& s, const Vector& x);

// ||x - project(s, x)||.
double distance(const ConvexSetSpec& s, const Vector& x);

// Gradient of 0.5 * distance(s, .)^2, i.e. x - project(s, x). 1-Lipschitz.
Vector sq_dist_grad(const ConvexSetSpec& s, const Vector& x);

bool contains(const ConvexSetSpec& s, const Vector& x, double tol);

// Two parallel hyperplanes <normal,x> + offset1 = 0 and <normal,x> + offset2 = 0.
struct HyperplanePair {
    Vector normal;
    double offset1;
    double offset2;
};

// |offset1 - offset2| / ||normal||.
double margin_between(const HyperplanePair& p);

}  // namespace marginforge::sets
