#pragma once

// Figures: escape-time rasters of the parameter or dynamical plane with ray
// overlays (binary PPM), and chord diagrams of lamination classes (SVG).

#include "nrp/lamination.hpp"
#include "nrp/quad.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nrp {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// "#rrggbb".
Rgb parse_color(const std::string& s);
std::string to_hex(Rgb c);

struct Viewport {
    Complex center{0, 0};
    double width = 4.0;  // extent of the real axis across the image
    int pixels_x = 512;
    int pixels_y = 512;

    void validate() const;
    double pixel_size() const { return width / pixels_x; }
    /// Plane point at the centre of pixel (x, y); y grows downwards.
    Complex to_plane(int x, int y) const;
    /// Pixel containing z, if inside the image.
    std::optional<std::pair<int, int>> to_pixel(Complex z) const;
};

enum class PlaneKind { parameter, dynamical };

struct RenderStyle {
    Rgb interior{0, 0, 0};
    Rgb exterior_near{255, 230, 160};  // slow escape
    Rgb exterior_far{20, 30, 90};      // fast escape
    Rgb ray{230, 40, 40};
    Rgb point{40, 200, 90};
};

/// Override one colour: interior, exterior_near, exterior_far, ray, point.
void set_style(RenderStyle& s, const std::string& key, const std::string& color);

struct RenderSpec {
    PlaneKind plane = PlaneKind::parameter;
    Parameter c;  // used for the dynamical plane
    Viewport view;
    int max_iter = 500;
    std::vector<std::vector<Complex>> rays;  // polylines (e.g. ray trace samples)
    std::vector<Complex> points;             // marked points
    RenderStyle style;
    unsigned threads = 0;  // 0: one per hardware thread
};

/// Iterations until |z| > 4 starting from z0 under z^2 + c, or -1 when the
/// orbit stays bounded for max_iter steps.
int escape_time(Complex z0, Complex c, int max_iter);

struct Raster {
    int width = 0;
    int height = 0;
    std::vector<int> escape;  // per pixel, row-major; -1 = no escape
    std::vector<Rgb> pixels;

    const Rgb& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

/// Rows render concurrently; output is identical for any thread count.
Raster render_plane(const RenderSpec& spec);

void write_ppm(std::ostream& os, const Raster& img);

struct ChordStyle {
    int size = 512;
    Rgb characteristic{200, 30, 30};
    Rgb critical{30, 80, 200};
    Rgb forward_image{90, 90, 90};
    Rgb generic{0, 0, 0};
    double stroke = 1.5;
};

/// Override one colour (characteristic, critical, forward_image, generic) or
/// stroke (a width in pixels).
void set_style(ChordStyle& s, const std::string& key, const std::string& value);

struct ChordDiagram {
    std::vector<LaminationClass> classes;
    ChordStyle style;
};

/// Angle t is drawn at e^{2 pi i t} on the unit circle; a class of two or
/// more clusters is drawn as the boundary of its convex hull, a single
/// cluster as a dot.
std::string render_chords(const ChordDiagram& d);

}  // namespace nrp
