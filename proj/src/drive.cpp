#include "rt/embed.hpp"
#include "rt/errors.hpp"

namespace rt {

DriveResult drive(const RBGraph& g, const Tree& t, const DeskConstants& dc) {
    dc.check();
    Bipartition b = bipartition(t);
    auto w = detect_extremal(g, dc.mu, b.t1, b.t2);
    if (!w) throw GateError("extremal", "host is not close to either Burr colouring at mu = " + std::to_string(dc.mu));
    return w->kind == 1 ? drive_type1(g, t, *w, dc) : drive_type2(g, t, *w, dc);
}

}  // namespace rt
