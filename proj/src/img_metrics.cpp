#include "mmvpr/img_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "mmvpr/error.hpp"

namespace mmvpr {

namespace {

constexpr int kWindow = 8;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

// Inclusive-exclusive summed-area table, sat[(h+1)*(w+1)].
struct Sat {
    int width;
    std::vector<double> cells;

    Sat(const ImageBuffer& img, int channel, const ImageBuffer* other, int mode)
        : width(img.width() + 1), cells(static_cast<std::size_t>(img.height() + 1) * (img.width() + 1), 0.0) {
        const int h = img.height();
        const int w = img.width();
        for (int y = 0; y < h; ++y) {
            double row_acc = 0.0;
            for (int x = 0; x < w; ++x) {
                const double u = img.at(y, x, channel) / 255.0;
                double v = u;
                if (mode == 1) v = u * u;                                        // sum of squares
                if (mode == 2) v = u * (other->at(y, x, channel) / 255.0);       // cross term
                row_acc += v;
                cells[static_cast<std::size_t>(y + 1) * width + (x + 1)] =
                    cells[static_cast<std::size_t>(y) * width + (x + 1)] + row_acc;
            }
        }
    }

    double box(int y0, int x0, int y1, int x1) const {  // [y0,y1) x [x0,x1)
        return cells[static_cast<std::size_t>(y1) * width + x1] -
               cells[static_cast<std::size_t>(y0) * width + x1] -
               cells[static_cast<std::size_t>(y1) * width + x0] +
               cells[static_cast<std::size_t>(y0) * width + x0];
    }
};

double ssim_channel(const ImageBuffer& a, const ImageBuffer& b, int channel) {
    const int h = a.height();
    const int w = a.width();
    const int wh = std::min(kWindow, h);
    const int ww = std::min(kWindow, w);
    const double n = static_cast<double>(wh) * ww;

    const Sat sa(a, channel, nullptr, 0);
    const Sat sb(b, channel, nullptr, 0);
    const Sat saa(a, channel, nullptr, 1);
    const Sat sbb(b, channel, nullptr, 1);
    const Sat sab(a, channel, &b, 2);

    double acc = 0.0;
    std::size_t windows = 0;
    for (int y = 0; y + wh <= h; ++y) {
        for (int x = 0; x + ww <= w; ++x) {
            const double sum_a = sa.box(y, x, y + wh, x + ww);
            const double sum_b = sb.box(y, x, y + wh, x + ww);
            const double mu_a = sum_a / n;
            const double mu_b = sum_b / n;
            const double var_a = saa.box(y, x, y + wh, x + ww) / n - mu_a * mu_a;
            const double var_b = sbb.box(y, x, y + wh, x + ww) / n - mu_b * mu_b;
            const double cov = sab.box(y, x, y + wh, x + ww) / n - mu_a * mu_b;
            const double num = (2.0 * mu_a * mu_b + kC1) * (2.0 * cov + kC2);
            const double den = (mu_a * mu_a + mu_b * mu_b + kC1) * (var_a + var_b + kC2);
            acc += num / den;
            ++windows;
        }
    }
    return acc / static_cast<double>(windows);
}

}  // namespace

ImgScores img_scores(const ImageBuffer& a, const ImageBuffer& b) {
    if (a.height() != b.height() || a.width() != b.width()) {
        std::ostringstream os;
        os << "img_scores: dimension mismatch, " << a.height() << "x" << a.width() << " vs "
           << b.height() << "x" << b.width();
        throw Error(os.str());
    }
    if (a.channels() != b.channels()) {
        std::ostringstream os;
        os << "img_scores: channel mismatch, " << a.channels() << " vs " << b.channels();
        throw Error(os.str());
    }

    double abs_sum = 0.0;
    double sq_sum = 0.0;
    const std::size_t n = a.samples().size();
    for (std::size_t i = 0; i < n; ++i) {
        const double d = (static_cast<double>(a.samples()[i]) - static_cast<double>(b.samples()[i])) / 255.0;
        abs_sum += std::abs(d);
        sq_sum += d * d;
    }
    const double mse = sq_sum / static_cast<double>(n);

    ImgScores s;
    s.l1_pct = 100.0 * abs_sum / static_cast<double>(n);
    s.l2_pct = 100.0 * mse;
    s.psnr = mse < 1e-10 ? 100.0 : 10.0 * std::log10(1.0 / mse);

    double ssim_acc = 0.0;
    for (int c = 0; c < a.channels(); ++c) {
        ssim_acc += ssim_channel(a, b, c);
    }
    s.ssim = ssim_acc / a.channels();
    return s;
}

}  // namespace mmvpr
