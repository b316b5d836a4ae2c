#pragma once

#include "mmvpr/types.hpp"

namespace mmvpr {

/// L1/L2 are percentages of the unit intensity range; PSNR is in dB with a
/// 100 dB cap; SSIM uses an unweighted 8x8 sliding window (stride 1) with the
/// standard stabilization constants C1=(0.01)^2 and C2=(0.03)^2 on the unit
/// scale, computed per channel and then averaged. Window statistics divide by
/// the window pixel count. Images smaller than the window fall back to a
/// single window covering what is there.
struct ImgScores {
    double l1_pct = 0.0;
    double l2_pct = 0.0;
    double psnr = 0.0;
    double ssim = 0.0;
};

ImgScores img_scores(const ImageBuffer& a, const ImageBuffer& b);

}  // namespace mmvpr
