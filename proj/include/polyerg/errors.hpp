#pragma once

#include <stdexcept>
#include <string>

namespace polyerg {

struct PolyergError : std::runtime_error {
    explicit PolyergError(const std::string& msg) : std::runtime_error(msg) {}
};

#define POLYERG_ERROR(Name)                                              \
    struct Name : PolyergError {                                         \
        explicit Name(const std::string& msg = #Name) : PolyergError(msg) {} \
    }

// geometry
POLYERG_ERROR(NonConvex);
POLYERG_ERROR(DegenerateEdge);
POLYERG_ERROR(TooFewVertices);
POLYERG_ERROR(VertexHitError);
POLYERG_ERROR(VertexArg);

// billiard
POLYERG_ERROR(SingularPoint);
POLYERG_ERROR(ResolutionTooCoarse);
POLYERG_ERROR(FacingParallelSides);
POLYERG_ERROR(CertificateExhausted);

// slap / piecewise maps
POLYERG_ERROR(DepthExplosion);
POLYERG_ERROR(NotExpanding);
POLYERG_ERROR(EigSolveFailure);
POLYERG_ERROR(AmbiguousSupport);
POLYERG_ERROR(WordExplosion);
POLYERG_ERROR(UnresolvedBoundary);

// srb
POLYERG_ERROR(TooManyTruncatedOrbits);
POLYERG_ERROR(OrbitTruncated);
POLYERG_ERROR(UnmatchedSupport);
POLYERG_ERROR(EpsTooLarge);
POLYERG_ERROR(MissingOrders);
POLYERG_ERROR(NewtonDiverged);
POLYERG_ERROR(NotHyperbolic);

// corpus
POLYERG_ERROR(AlphaOutOfRange);
POLYERG_ERROR(NotSeparated);

// io
POLYERG_ERROR(InputError);

#undef POLYERG_ERROR

}  // namespace polyerg
