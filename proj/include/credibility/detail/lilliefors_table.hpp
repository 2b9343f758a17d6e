#pragma once

// Generated by tools/gen_lilliefors_table.cpp (100000 null replicates per n).
// Upper quantiles of sqrt(n) * D, D the KS distance to the normal fitted
// with the sample mean and the n-1 standard deviation. Do not edit.

#include <array>
#include <cstddef>

namespace credibility::detail::lilliefors {

inline constexpr std::array<double, 23> kAlphas = {0.001, 0.0025, 0.005, 0.01, 0.02, 0.025, 0.03, 0.04, 0.05, 0.06, 0.075, 0.08, 0.1, 0.125, 0.15, 0.175, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};

inline constexpr std::array<std::size_t, 49> kSizes = {4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25, 26, 27, 28, 29, 30, 35, 40, 45, 50, 60, 70, 80, 90, 100, 120, 140, 160, 180, 200, 250, 300, 400, 500, 700, 1000, 1500, 2000};

inline constexpr std::array<std::array<double, 23>, 49> kScaledQuantiles = {{
    {0.865684, 0.854841, 0.843719, 0.826070, 0.802549, 0.791821, 0.782092, 0.765423, 0.751427, 0.737789, 0.718733, 0.713204, 0.690429, 0.665815, 0.643083, 0.621656, 0.605587, 0.586226, 0.570416, 0.556180, 0.542396, 0.529214, 0.516310},
    {0.980196, 0.952346, 0.925650, 0.888375, 0.839499, 0.822123, 0.806635, 0.783614, 0.766926, 0.752773, 0.736187, 0.731085, 0.712958, 0.693516, 0.676437, 0.661263, 0.646508, 0.619923, 0.595805, 0.573591, 0.553821, 0.537437, 0.522003},
    {1.035599, 0.988273, 0.949410, 0.908641, 0.864108, 0.847385, 0.834638, 0.811537, 0.792367, 0.775650, 0.754001, 0.748055, 0.727343, 0.706016, 0.687971, 0.672359, 0.658434, 0.633431, 0.611430, 0.590856, 0.571948, 0.553585, 0.535519},
    {1.054757, 1.010306, 0.970884, 0.925497, 0.874833, 0.857647, 0.843919, 0.821714, 0.803170, 0.787664, 0.767629, 0.761737, 0.740653, 0.718380, 0.699536, 0.682654, 0.667298, 0.641171, 0.618860, 0.599167, 0.580285, 0.562750, 0.546137},
    {1.086584, 1.033745, 0.988142, 0.942165, 0.891110, 0.873295, 0.857853, 0.833976, 0.814550, 0.797612, 0.777847, 0.771599, 0.748988, 0.726919, 0.706597, 0.689248, 0.674271, 0.647830, 0.624815, 0.604321, 0.585045, 0.566873, 0.550193},
    {1.097125, 1.043444, 0.999073, 0.952060, 0.901430, 0.882847, 0.868065, 0.843812, 0.822817, 0.806678, 0.785726, 0.779643, 0.757605, 0.734776, 0.715492, 0.698572, 0.682833, 0.655658, 0.631709, 0.611071, 0.591155, 0.572799, 0.555288},
    {1.117957, 1.063259, 1.016531, 0.958504, 0.906247, 0.887552, 0.872022, 0.846810, 0.827903, 0.811128, 0.790416, 0.783917, 0.761498, 0.738412, 0.719646, 0.702685, 0.687214, 0.659785, 0.636413, 0.615625, 0.595818, 0.577062, 0.559530},
    {1.116690, 1.058750, 1.014718, 0.964413, 0.912162, 0.893931, 0.878494, 0.854180, 0.834601, 0.816858, 0.794445, 0.788195, 0.765636, 0.743103, 0.722375, 0.705658, 0.690390, 0.662566, 0.638698, 0.617651, 0.597770, 0.579933, 0.562653},
    {1.124561, 1.066585, 1.020967, 0.971809, 0.917238, 0.898907, 0.883029, 0.858697, 0.838179, 0.820887, 0.800375, 0.793939, 0.771542, 0.748428, 0.728267, 0.710485, 0.694641, 0.666550, 0.642173, 0.620788, 0.600998, 0.582025, 0.564448},
    {1.137250, 1.075718, 1.024609, 0.975267, 0.920827, 0.903379, 0.888645, 0.863612, 0.842635, 0.825487, 0.802549, 0.795951, 0.773614, 0.749194, 0.729565, 0.712495, 0.696560, 0.669211, 0.645302, 0.623707, 0.603932, 0.585511, 0.567489},
    {1.147732, 1.087583, 1.037428, 0.983585, 0.925743, 0.906550, 0.890305, 0.865905, 0.844471, 0.827739, 0.806139, 0.799756, 0.777320, 0.753900, 0.733736, 0.715694, 0.699780, 0.671869, 0.647841, 0.626642, 0.606902, 0.588160, 0.570723},
    {1.141520, 1.081428, 1.032707, 0.984243, 0.928348, 0.908374, 0.893519, 0.869234, 0.849414, 0.832361, 0.809426, 0.803069, 0.780108, 0.755947, 0.735473, 0.717675, 0.701284, 0.673630, 0.649717, 0.628626, 0.608349, 0.589198, 0.571415},
    {1.147611, 1.090129, 1.039451, 0.985429, 0.930170, 0.911290, 0.896232, 0.870399, 0.850589, 0.833278, 0.810323, 0.803681, 0.781593, 0.757793, 0.737159, 0.719850, 0.703543, 0.675122, 0.650740, 0.629678, 0.609769, 0.591543, 0.573544},
    {1.167246, 1.100480, 1.044452, 0.991554, 0.933627, 0.914617, 0.897948, 0.872814, 0.851482, 0.833088, 0.811474, 0.805544, 0.782189, 0.758599, 0.738408, 0.720513, 0.704770, 0.677023, 0.652215, 0.630412, 0.610291, 0.591552, 0.573863},
    {1.158701, 1.098712, 1.042981, 0.994974, 0.939262, 0.919195, 0.901475, 0.875438, 0.855133, 0.837099, 0.814916, 0.808161, 0.785755, 0.761618, 0.741215, 0.724150, 0.708477, 0.680920, 0.656122, 0.634064, 0.613795, 0.594965, 0.577158},
    {1.177236, 1.102749, 1.052296, 0.998724, 0.942173, 0.922768, 0.905363, 0.879930, 0.858047, 0.840084, 0.818078, 0.811816, 0.787641, 0.763966, 0.743349, 0.725043, 0.708849, 0.680622, 0.655832, 0.633677, 0.613241, 0.594534, 0.576937},
    {1.172157, 1.103332, 1.051972, 0.996466, 0.939224, 0.919941, 0.903626, 0.878604, 0.857253, 0.839893, 0.818079, 0.811908, 0.788431, 0.763675, 0.743192, 0.725017, 0.708327, 0.680477, 0.656142, 0.634495, 0.614713, 0.595833, 0.578088},
    {1.158533, 1.103221, 1.056208, 0.998723, 0.942603, 0.924010, 0.907509, 0.882377, 0.860556, 0.843060, 0.820526, 0.814402, 0.790501, 0.766737, 0.746326, 0.728209, 0.712142, 0.683103, 0.658987, 0.637277, 0.617218, 0.598437, 0.580399},
    {1.163156, 1.110376, 1.055332, 1.000835, 0.942374, 0.924668, 0.908937, 0.882835, 0.861754, 0.844119, 0.821725, 0.815604, 0.792142, 0.766910, 0.746119, 0.728305, 0.712249, 0.683594, 0.658828, 0.637109, 0.616924, 0.597923, 0.580597},
    {1.173267, 1.109098, 1.059478, 1.004787, 0.948004, 0.928611, 0.911430, 0.884544, 0.863467, 0.845946, 0.823757, 0.816923, 0.793647, 0.769324, 0.749002, 0.730082, 0.713311, 0.685068, 0.660613, 0.638575, 0.618239, 0.599519, 0.581729},
    {1.174376, 1.114282, 1.062857, 1.006347, 0.948277, 0.929985, 0.913014, 0.885772, 0.864014, 0.846299, 0.823759, 0.817020, 0.793308, 0.769161, 0.748138, 0.730177, 0.713918, 0.685570, 0.661196, 0.638940, 0.618566, 0.599429, 0.581768},
    {1.174536, 1.113654, 1.060142, 1.008351, 0.949583, 0.930728, 0.914346, 0.887550, 0.865322, 0.848359, 0.826353, 0.819935, 0.795458, 0.771459, 0.750342, 0.731716, 0.715403, 0.686088, 0.660965, 0.639417, 0.619250, 0.600227, 0.581733},
    {1.170896, 1.111327, 1.059269, 1.005809, 0.947199, 0.928346, 0.911662, 0.884155, 0.863228, 0.844867, 0.823927, 0.817526, 0.793980, 0.769319, 0.749117, 0.730524, 0.714367, 0.685947, 0.661419, 0.639910, 0.619502, 0.600940, 0.583147},
    {1.182477, 1.120073, 1.065545, 1.010903, 0.949951, 0.930616, 0.915312, 0.887992, 0.867600, 0.849831, 0.827805, 0.820895, 0.796962, 0.772765, 0.751761, 0.733822, 0.717363, 0.689026, 0.664300, 0.642257, 0.622465, 0.603675, 0.585570},
    {1.169041, 1.113357, 1.063664, 1.009022, 0.951104, 0.931010, 0.913154, 0.888450, 0.866985, 0.849251, 0.826342, 0.819495, 0.796789, 0.771678, 0.750417, 0.733123, 0.716944, 0.688746, 0.664177, 0.641400, 0.621252, 0.602331, 0.584230},
    {1.178329, 1.115740, 1.066949, 1.011637, 0.950489, 0.932303, 0.916341, 0.889618, 0.868146, 0.850077, 0.827255, 0.820389, 0.797339, 0.772648, 0.752001, 0.733847, 0.717557, 0.689250, 0.664404, 0.641947, 0.621792, 0.603030, 0.585158},
    {1.175756, 1.110167, 1.063239, 1.010108, 0.952033, 0.932562, 0.916539, 0.890748, 0.868676, 0.850602, 0.827632, 0.820600, 0.798068, 0.772973, 0.752476, 0.734148, 0.718334, 0.689938, 0.665200, 0.642636, 0.622739, 0.604493, 0.586079},
    {1.196667, 1.126283, 1.074072, 1.018382, 0.959414, 0.940762, 0.923400, 0.896275, 0.873892, 0.855820, 0.833937, 0.827216, 0.802936, 0.778697, 0.757191, 0.739306, 0.722653, 0.694082, 0.668966, 0.646005, 0.625339, 0.606285, 0.587876},
    {1.190630, 1.126820, 1.075236, 1.016401, 0.959931, 0.939494, 0.923737, 0.896376, 0.875137, 0.856674, 0.833330, 0.826313, 0.802296, 0.778086, 0.757323, 0.739088, 0.722150, 0.692987, 0.669066, 0.646976, 0.626399, 0.607704, 0.589600},
    {1.194404, 1.132704, 1.079023, 1.023696, 0.962641, 0.941643, 0.925152, 0.899717, 0.878422, 0.859635, 0.837547, 0.831282, 0.807036, 0.782655, 0.761524, 0.743220, 0.726686, 0.697701, 0.672760, 0.649817, 0.629459, 0.610660, 0.592429},
    {1.198582, 1.134891, 1.080034, 1.023004, 0.961970, 0.941845, 0.926594, 0.901567, 0.880482, 0.862599, 0.839531, 0.833410, 0.809661, 0.784335, 0.762499, 0.744488, 0.728376, 0.699476, 0.674247, 0.652147, 0.631828, 0.612596, 0.594683},
    {1.202217, 1.136761, 1.084636, 1.028320, 0.966901, 0.946050, 0.929999, 0.903238, 0.881370, 0.862855, 0.840615, 0.833887, 0.809742, 0.784876, 0.763451, 0.745159, 0.728529, 0.699904, 0.675595, 0.653413, 0.632903, 0.614053, 0.596198},
    {1.206870, 1.137421, 1.086561, 1.029818, 0.966336, 0.947107, 0.930778, 0.905695, 0.884275, 0.865865, 0.842322, 0.835459, 0.811360, 0.787132, 0.766511, 0.747966, 0.730964, 0.702015, 0.677279, 0.655117, 0.634772, 0.615393, 0.596928},
    {1.213854, 1.144693, 1.092358, 1.032153, 0.972979, 0.952952, 0.936301, 0.909737, 0.887293, 0.869246, 0.845464, 0.838655, 0.814477, 0.789951, 0.768848, 0.750270, 0.733324, 0.704403, 0.679746, 0.657596, 0.637095, 0.617886, 0.599615},
    {1.217264, 1.149915, 1.094926, 1.040681, 0.976620, 0.955310, 0.938116, 0.911903, 0.890152, 0.870929, 0.847728, 0.840520, 0.816607, 0.790707, 0.769898, 0.751733, 0.735273, 0.705965, 0.681108, 0.658663, 0.638513, 0.619272, 0.600685},
    {1.211841, 1.154045, 1.097203, 1.040436, 0.977674, 0.956696, 0.939380, 0.911886, 0.890028, 0.871383, 0.848991, 0.841827, 0.817359, 0.792036, 0.770423, 0.751530, 0.734980, 0.705769, 0.681161, 0.658880, 0.638031, 0.618815, 0.600509},
    {1.220047, 1.157824, 1.102821, 1.041596, 0.978846, 0.956578, 0.939735, 0.912610, 0.890799, 0.872112, 0.848651, 0.841781, 0.817137, 0.792017, 0.770821, 0.752384, 0.736012, 0.706763, 0.681475, 0.659188, 0.638889, 0.619592, 0.601400},
    {1.219491, 1.152526, 1.096250, 1.039519, 0.978321, 0.958154, 0.941565, 0.913208, 0.891445, 0.873305, 0.850387, 0.843715, 0.820209, 0.794565, 0.773221, 0.754992, 0.738460, 0.709398, 0.684577, 0.662067, 0.641142, 0.621762, 0.603276},
    {1.221164, 1.154709, 1.100029, 1.041815, 0.980888, 0.959442, 0.943669, 0.916444, 0.894225, 0.875420, 0.852293, 0.845159, 0.820231, 0.795008, 0.774240, 0.756075, 0.739737, 0.710211, 0.684703, 0.662398, 0.641777, 0.622703, 0.604546},
    {1.237795, 1.166771, 1.103382, 1.045383, 0.983918, 0.963756, 0.946253, 0.917802, 0.896880, 0.878033, 0.855331, 0.847930, 0.823605, 0.798543, 0.776858, 0.758207, 0.741692, 0.711918, 0.687185, 0.664625, 0.643666, 0.624722, 0.606144},
    {1.222381, 1.153321, 1.100639, 1.043390, 0.983799, 0.963531, 0.946329, 0.919291, 0.896025, 0.877745, 0.854037, 0.847475, 0.822958, 0.797312, 0.775473, 0.756583, 0.740398, 0.711502, 0.685993, 0.663920, 0.643390, 0.624412, 0.606117},
    {1.221056, 1.161541, 1.103788, 1.047429, 0.986642, 0.966639, 0.948793, 0.921513, 0.899466, 0.881110, 0.857826, 0.850591, 0.826427, 0.800572, 0.779619, 0.760686, 0.743697, 0.714742, 0.689374, 0.666657, 0.646001, 0.626281, 0.608117},
    {1.229616, 1.152583, 1.105038, 1.050032, 0.988647, 0.966428, 0.948315, 0.919446, 0.897673, 0.878931, 0.855851, 0.849505, 0.825985, 0.800396, 0.778897, 0.760021, 0.743087, 0.714095, 0.688635, 0.666102, 0.645735, 0.626936, 0.608231},
    {1.220729, 1.162999, 1.107969, 1.046706, 0.986207, 0.966105, 0.949635, 0.921714, 0.900031, 0.881885, 0.858410, 0.851662, 0.827572, 0.802544, 0.780660, 0.762237, 0.745926, 0.716883, 0.691840, 0.668986, 0.648616, 0.628944, 0.610351},
    {1.223814, 1.156814, 1.107643, 1.049309, 0.989361, 0.967405, 0.952034, 0.924370, 0.900561, 0.882607, 0.860109, 0.852917, 0.828726, 0.803364, 0.781985, 0.763489, 0.746839, 0.717327, 0.692145, 0.669748, 0.648859, 0.629624, 0.611265},
    {1.233802, 1.165189, 1.111134, 1.050692, 0.992085, 0.972256, 0.954567, 0.924872, 0.902044, 0.882840, 0.859453, 0.852601, 0.829228, 0.803797, 0.782691, 0.764113, 0.747601, 0.718432, 0.693272, 0.670695, 0.649949, 0.630493, 0.612485},
    {1.232960, 1.160499, 1.106501, 1.050521, 0.988724, 0.968897, 0.951449, 0.923933, 0.902912, 0.883712, 0.860781, 0.854015, 0.830512, 0.804800, 0.783754, 0.765743, 0.748721, 0.719793, 0.694894, 0.672387, 0.651800, 0.632348, 0.613593},
    {1.233504, 1.163765, 1.107428, 1.052246, 0.990425, 0.970047, 0.954016, 0.926709, 0.903706, 0.885576, 0.862133, 0.854798, 0.830892, 0.805468, 0.784032, 0.765043, 0.748309, 0.718734, 0.694230, 0.671476, 0.651120, 0.632066, 0.613463},
    {1.239885, 1.164289, 1.109023, 1.053575, 0.992302, 0.972330, 0.955153, 0.927699, 0.906490, 0.886509, 0.863674, 0.857384, 0.832162, 0.807805, 0.786730, 0.768094, 0.751363, 0.721976, 0.696729, 0.674277, 0.653747, 0.634389, 0.615620},
}};

}  // namespace credibility::detail::lilliefors
