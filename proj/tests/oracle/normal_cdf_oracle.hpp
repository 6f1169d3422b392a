#pragma once

// Standard normal CDF at z = -8, -7.75, ..., 8, computed with mpmath at 40
// significant digits and frozen here. Independent of the library's erfc path.

#include <array>

namespace pvaudit::test_oracle {

struct CdfPoint {
  double z;
  long double cdf;
};

inline constexpr std::array<CdfPoint, 65> kNormalCdf{{
    {-8.00, 6.220960574271784123515995e-16L},
    {-7.75, 4.594627435778595460155455e-15L},
    {-7.50, 3.190891672910896227767288e-14L},
    {-7.25, 2.083858158672069431189998e-13L},
    {-7.00, 1.279812543885835004383624e-12L},
    {-6.75, 7.39225777801782241951623e-12L},
    {-6.50, 4.016000583859117808346145e-11L},
    {-6.25, 2.052263425218938881622764e-10L},
    {-6.00, 9.865876450376981407008641e-10L},
    {-5.75, 4.462172453901611873069223e-9L},
    {-5.50, 1.898956246588771938385127e-8L},
    {-5.25, 7.604960516488714251146065e-8L},
    {-5.00, 0.0000002866515718791939116737523L},
    {-4.75, 0.000001017083242568703171259182L},
    {-4.50, 0.000003397673124730060401687449L},
    {-4.25, 0.00001068852577493442046920056L},
    {-4.00, 0.00003167124183311992125377076L},
    {-3.75, 0.00008841728520080386781775467L},
    {-3.50, 0.0002326290790355250363499259L},
    {-3.25, 0.0005770250423907670429169193L},
    {-3.00, 0.001349898031630094526651815L},
    {-2.75, 0.002979763235054556754294247L},
    {-2.50, 0.006209665325776135166978105L},
    {-2.25, 0.01222447265504470315262393L},
    {-2.00, 0.02275013194817920720028264L},
    {-1.75, 0.04005915686381709041875735L},
    {-1.50, 0.06680720126885806600449404L},
    {-1.25, 0.1056497736668552576887728L},
    {-1.00, 0.1586552539314570514147675L},
    {-0.75, 0.2266273523768681993270622L},
    {-0.50, 0.3085375387259868963622954L},
    {-0.25, 0.4012936743170762757591462L},
    {0.00, 0.5L},
    {0.25, 0.5987063256829237242408538L},
    {0.50, 0.6914624612740131036377046L},
    {0.75, 0.7733726476231318006729378L},
    {1.00, 0.8413447460685429485852325L},
    {1.25, 0.8943502263331447423112272L},
    {1.50, 0.933192798731141933995506L},
    {1.75, 0.9599408431361829095812427L},
    {2.00, 0.9772498680518207927997174L},
    {2.25, 0.9877755273449552968473761L},
    {2.50, 0.9937903346742238648330219L},
    {2.75, 0.9970202367649454432457058L},
    {3.00, 0.9986501019683699054733482L},
    {3.25, 0.9994229749576092329570831L},
    {3.50, 0.9997673709209644749636501L},
    {3.75, 0.9999115827147991961321822L},
    {4.00, 0.9999683287581668800787462L},
    {4.25, 0.9999893114742250655795308L},
    {4.50, 0.9999966023268752699395983L},
    {4.75, 0.9999989829167574312968287L},
    {5.00, 0.9999997133484281208060883L},
    {5.25, 0.9999999239503948351128575L},
    {5.50, 0.9999999810104375341122806L},
    {5.75, 0.9999999955378275460983881L},
    {6.00, 0.9999999990134123549623019L},
    {6.25, 0.9999999997947736574781061L},
    {6.50, 0.9999999999598399941614088L},
    {6.75, 0.9999999999926077422219822L},
    {7.00, 0.9999999999987201874561142L},
    {7.25, 0.9999999999997916141841328L},
    {7.50, 0.9999999999999680910832709L},
    {7.75, 0.9999999999999954053725642L},
    {8.00, 0.9999999999999993779039426L},
}};

}  // namespace pvaudit::test_oracle
