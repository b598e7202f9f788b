#include "floqsim/floquet.hpp"

#include "floqsim/special.hpp"

#include <cmath>

// Closed forms of the rotating-frame bond coefficients. Rows index the Pauli
// component on the even site, columns the one on the odd neighbour. The
// expressions are transcribed term by term, so they are long.

namespace floqsim {

namespace {

inline double sq(double v) { return v * v; }
inline double s(double v) { return std::sin(v); }
inline double c(double v) { return std::cos(v); }

}  // namespace

XiMatrix xi_closed_form(double te, double pe, double to, double po, double ge, double go) {
  const double d = pe - po;
  const double sge = s(ge), cge = c(ge), sgo = s(go), cgo = c(go);
  const double hgo = sq(s(go / 2)), hge = sq(s(ge / 2));
  const double xx =
      (sq(s(te))*c(pe)*(cgo*sq(c(to))*c(po)*c(d)-s(pe)*sgo*c(to)-cgo*s(po)*s(d)+sq(s(to))*c(po)*c(d))
      +cge*(cgo*(sq(c(to))*c(po)*(sq(c(te))*c(pe)*c(d)+s(pe)*s(d))+s(po)*(s(pe)*c(d)-sq(c(te))*c(pe)*s(d)))
      +sq(s(te))*s(pe)*c(pe)*sgo*c(to)+sq(c(te))*c(pe)*sq(s(to))*c(po)*c(d)+s(pe)*sq(s(to))*c(po)*s(d))
      +sge*c(te)*(sgo*c(to)-hgo*sq(s(to))*s(2*po)));
  const double yy =
      (sq(s(te))*s(pe)*(s(po)*c(d)*(cgo*sq(c(to))+sq(s(to)))+c(pe)*sgo*c(to)+cgo*c(po)*s(d))
      +cge*(cgo*(sq(c(pe))*(sq(c(to))*sq(s(po))+sq(c(po)))+sq(c(te))*s(pe)*(sq(c(to))*s(po)*c(d)+c(po)*s(d))+s(pe)*c(pe)*sq(s(to))*s(po)*c(po))
      -sq(s(te))*s(pe)*c(pe)*sgo*c(to)+sq(s(to))*s(po)*(sq(c(te))*s(pe)*c(d)-c(pe)*s(d)))
      +sge*c(te)*(sgo*c(to)+hgo*sq(s(to))*s(2*po)));
  const double zz =
      s(te)*s(to)*(c(d)*(sge*sgo+2*(1-cge)*c(te)*hgo*c(to))+s(d)*((1-cge)*c(te)*sgo-2*sge*hgo*c(to)));
  const double xy =
      (sq(s(to))*s(po)*(cge*(sq(c(te))*c(pe)*c(d)+s(pe)*s(d))+sq(s(te))*sq(c(pe))*c(po))
      +sq(s(po))*(sq(s(te))*sq(c(pe))*sgo*c(to)+0.5*sq(s(to))*(sq(s(te))*s(2*pe)-2*sge*c(te)))
      +sgo*c(to)*(sq(c(pe))*(cge*sq(c(te))+sq(s(te))*sq(c(po)))+cge*sq(s(pe)))
      +0.25*cgo*(4*cge*sq(c(te))*c(pe)*c(po)*(s(pe)*c(po)-c(pe)*sq(s(to))*s(po))+4*hge*sq(s(te))*s(2*pe)*sq(c(to))*sq(s(po))
      +4*s(pe)*c(pe)*sq(c(po))*(sq(s(te))-cge)-4*sq(s(to))*s(po)*c(po)*(cge*sq(s(pe))+sq(s(te))*sq(c(pe)))
      -sge*c(te)*(2*sq(s(to))*c(2*po)+c(2*to)+3)));
  const double yx =
      (1.0 /
      8)*(8*sge*c(te)*sq(s(to))*sq(c(po))+8*cge*sq(s(to))*s(po)*c(po)*(sq(c(te))*sq(s(pe))+sq(c(pe)))
      +2*cgo*(4*sq(c(to))*c(po)*(sq(s(te))*s(pe)*c(d)-cge*c(pe)*s(d))+4*cge*sq(c(te))*s(pe)*(sq(c(to))*c(po)*c(d)-s(po)*s(d))
      +sge*c(te)*(-2*sq(s(to))*c(2*po)+c(2*to)+3)-4*s(po)*(cge*c(pe)*c(d)+sq(s(te))*s(pe)*s(d)))
      +8*sq(s(te))*s(pe)*sq(s(to))*c(po)*(c(d)-cge*c(pe)*c(po))-8*sq(s(te))*sq(s(pe))*sgo*c(to)
      -2*cge*sgo*c(to)*(2*sq(s(te))*c(2*pe)+c(2*te)+3));
  const double yz =
      s(to)*(cge*sq(c(te))*s(pe)*(2*hgo*c(to)*c(d)+sgo*s(d))+sge*c(te)*(2*hgo*c(to)*c(po)-sgo*s(po))
      +c(d)*(2*sq(s(te))*s(pe)*hgo*c(to)+cge*c(pe)*sgo)+s(d)*(sq(s(te))*s(pe)*sgo-2*cge*c(pe)*hgo*c(to)));
  const double zy =
      s(te)*(cgo*(sge*c(pe)*(sq(c(to))*sq(s(po))+sq(c(po)))-(cge-1)*c(te)*(sq(c(to))*s(po)*c(d)+c(po)*s(d))+sge*s(pe)*sq(s(to))*s(po)*c(po))
      -sq(s(to))*s(po)*((cge-1)*c(te)*c(d)+sge*s(d))-sgo*c(to)*((cge-1)*c(te)*c(pe)+sge*s(pe)));
  const double xz =
      s(to)*(cge*(c(d)*(2*sq(c(te))*c(pe)*hgo*c(to)-s(pe)*sgo)+s(d)*(2*s(pe)*hgo*c(to)+sq(c(te))*c(pe)*sgo))
      +sq(s(te))*c(pe)*(2*hgo*c(to)*c(d)+sgo*s(d))-sge*c(te)*(2*hgo*c(to)*s(po)+sgo*c(po)));
  const double zx =
      s(te)*(sq(s(to))*c(po)*(2*hge*c(te)*c(d)-sge*s(d))-cgo*(sge*(sq(c(to))*c(po)*s(d)+s(po)*c(d))+(cge-1)*c(te)*(sq(c(to))*c(po)*c(d)-s(po)*s(d)))
      -sgo*c(to)*(sge*c(pe)-(cge-1)*c(te)*s(pe)));
  return XiMatrix{{{{xx, xy, xz}, {yx, yy, yz}, {zx, zy, zz}}}, XiKind::instantaneous};
}

XiMatrix xi_averaged_closed_form(double te, double pe, double to, double po, double le,
                                 double lo) {
  const double d = pe - po;
  const double Je = bessel_j0(le), Jo = bessel_j0(lo);
  const double Jp = bessel_j0(le + lo), Jm = bessel_j0(le - lo);
  const double xx =
      ((sq(s(te))*c(pe)*Jo*(sq(c(to))*c(po)*c(d)-s(po)*s(d))
      +sq(s(to))*c(po)*(Je*(sq(c(te))*c(pe)*c(d)+s(pe)*s(d))+sq(s(te))*c(pe)*c(d)))
      +Jp/2*(sq(c(te))*c(pe)*(sq(c(to))*c(po)*c(d)-s(po)*s(d))+s(pe)*(sq(c(to))*c(po)*s(d)+s(po)*c(d))-c(te)*c(to))
      +Jm/2*(sq(c(te))*c(pe)*(sq(c(to))*c(po)*c(d)-s(po)*s(d))+s(pe)*(sq(c(to))*c(po)*s(d)+s(po)*c(d))+c(te)*c(to)));
  const double yy =
      ((sq(s(te))*s(pe)*Jo*(sq(c(to))*s(po)*c(d)+c(po)*s(d))
      +sq(s(to))*s(po)*(s(pe)*c(d)*(sq(c(te))*Je+sq(s(te)))-Je*c(pe)*s(d)))
      +Jp/2*(c(pe)*(c(pe)*(sq(c(to))*sq(s(po))+sq(c(po)))+s(pe)*sq(s(to))*s(po)*c(po))+sq(c(te))*s(pe)*(sq(c(to))*s(po)*c(d)+c(po)*s(d))-c(te)*c(to))
      +Jm/2*(c(pe)*(c(pe)*(sq(c(to))*sq(s(po))+sq(c(po)))+s(pe)*sq(s(to))*s(po)*c(po))+sq(c(te))*s(pe)*(sq(c(to))*s(po)*c(d)+c(po)*s(d))+c(te)*c(to)));
  const double zz =
      0.5*s(te)*s(to)*c(d)*(2*c(te)*c(to)*(1-Je-Jo)+(c(te)*c(to)-1)*Jp+(c(te)*c(to)+1)*Jm);
  const double xy =
      (1.0 /
      16)*(sq(s(to))*s(2*po)*(2*sq(s(te))*(2-4*sq(c(pe))*Jo+c(2*pe)*(Jm+Jp-2*Je+2))+(c(2*te)+3)*(2*Je-Jm-Jp))
      +sq(s(te))*s(2*pe)*((2*Jo-Jm-Jp)*(2*sq(s(to))*c(2*po)+c(2*to)+3)-8*(Je-1)*sq(s(to))*sq(s(po))));
  const double yx =
      0.5*(sq(s(te))*((1-Je)*s(2*pe)*sq(s(to))*sq(c(po))+2*s(pe)*Jo*(sq(c(to))*c(po)*c(d)-s(po)*s(d)))
      +sq(s(to))*s(2*po)*(sq(s(pe))*(sq(c(te))*Je+sq(s(te)))+Je*sq(c(pe)))
      +Jm*(sq(c(te))*s(pe)*(sq(c(to))*c(po)*c(d)-s(po)*s(d))-c(pe)*(sq(c(to))*c(po)*s(d)+s(po)*c(d)))
      +Jp*(sq(c(te))*s(pe)*(sq(c(to))*c(po)*c(d)-s(po)*s(d))-c(pe)*(sq(c(to))*c(po)*s(d)+s(po)*c(d))));
  const double yz =
      0.5*(s(2*to)*(s(pe)*c(d)*(sq(c(te))*Je-sq(s(te))*(Jo-1))-Je*c(pe)*s(d))
      -s(to)*Jm*(sq(c(te))*s(pe)*c(to)*c(d)+c(te)*s(po)-c(pe)*c(to)*s(d))
      +s(to)*Jp*(c(te)*s(po)+c(pe)*c(to)*s(d)-sq(c(te))*s(pe)*c(to)*c(d)));
  const double zy =
      0.5*s(te)*(-c(te)*(Jm+Jp-2*Jo)*(sq(c(to))*s(po)*c(d)+c(po)*s(d))-2*c(te)*(Je-1)*sq(s(to))*s(po)*c(d)+s(pe)*c(to)*(Jp-Jm));
  const double xz =
      0.5*(s(2*to)*(c(pe)*c(d)*(sq(c(te))*Je-sq(s(te))*(Jo-1))+Je*s(pe)*s(d))
      -s(to)*Jp*(sq(c(te))*c(pe)*c(to)*c(d)-c(te)*c(po)+s(pe)*c(to)*s(d))
      -s(to)*Jm*(c(te)*(c(te)*c(pe)*c(to)*c(d)+c(po))+s(pe)*c(to)*s(d)));
  const double zx =
      0.5*(s(2*te)*(c(po)*c(d)*(sq(c(to))*Jo-(Je-1)*sq(s(to)))-Jo*s(po)*s(d))
      +s(te)*Jp*(c(pe)*c(to)+c(te)*s(po)*s(d)-c(te)*sq(c(to))*c(po)*c(d))
      -s(te)*Jm*(c(to)*(c(te)*c(to)*c(po)*c(d)+c(pe))-c(te)*s(po)*s(d)));
  return XiMatrix{{{{xx, xy, xz}, {yx, yy, yz}, {zx, zy, zz}}}, XiKind::averaged};
}

}  // namespace floqsim
