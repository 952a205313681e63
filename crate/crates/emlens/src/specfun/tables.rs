// Chebyshev coefficients for Airy evaluation on [3.5, 9] (positive side:
// exponentially scaled, reduced to ~1; negative side: slowly varying
// modulus/phase residual functions P, Q and their derivative analogues).
// Asymptotic coefficient tables u_k, v_k follow.

pub(super) const CHEB_LO: f64 = 3.5;
pub(super) const CHEB_HI: f64 = 9.0;

pub(super) const AI_POS: [f64; 24] = [
    0.992390874675816670,
    0.00492200846764398712,
    -0.00133225712139425883,
    0.000335660561817775472,
    -0.0000813000475697130371,
    0.0000192050909704492486,
    -4.45945431763610650e-6,
    1.02277323218229424e-6,
    -2.32436801015699001e-7,
    5.24619289933375878e-8,
    -1.17794064249654490e-8,
    2.63446980456126566e-9,
    -5.87463628881866549e-10,
    1.30714363765742083e-10,
    -2.90394465392549071e-11,
    6.44452811846600395e-12,
    -1.42923912347674932e-12,
    3.16861417198280572e-13,
    -7.02420364245995269e-14,
    1.55732242051225938e-14,
    -3.45371071407423125e-15,
    7.66260901461101132e-16,
    -1.70096594537812620e-16,
    3.77813590033147184e-17,
];

pub(super) const AIP_POS: [f64; 25] = [
    1.01076829386169667,
    -0.00702319321431328358,
    0.00191983353587702594,
    -0.000489096518827022429,
    0.000119908856949193175,
    -0.0000286964081600215881,
    6.75580524278970814e-6,
    -1.57198484548612767e-6,
    3.62657824014166417e-7,
    -8.31327951841634441e-8,
    1.89655721919741462e-8,
    -4.31118205022340479e-9,
    9.77373567028761802e-10,
    -2.21139800935596304e-10,
    4.99639886366218124e-11,
    -1.12777355427529842e-11,
    2.54397190077079196e-12,
    -5.73651156976411936e-13,
    1.29337098608029552e-13,
    -2.91616740510582436e-14,
    6.57618633620265750e-15,
    -1.48338278133586214e-15,
    3.34722096656691659e-16,
    -7.55602817866263281e-17,
    1.70647485951458626e-17,
];

pub(super) const BI_POS: [f64; 27] = [
    1.00898076212904190,
    -0.00661668532255344033,
    0.00211374202691656869,
    -0.000650254980036879364,
    0.000199001411508397176,
    -0.0000612731853891650720,
    0.0000189248759848683051,
    -5.76763744132412297e-6,
    1.68413355342352759e-6,
    -4.50414359549061041e-7,
    1.01871849264392018e-7,
    -1.54511959807748358e-8,
    -8.84239471990628677e-10,
    1.88340722235020847e-9,
    -9.18234828657980872e-10,
    3.13654182363996912e-10,
    -8.31360679650572243e-11,
    1.65854007775943976e-11,
    -1.92249202817638681e-12,
    -1.96030475531434324e-13,
    1.88560922057412344e-13,
    -6.23131556067310942e-14,
    1.35022432704025248e-14,
    -1.78838507269908828e-15,
    -1.60929602194990417e-17,
    8.73774687576963316e-17,
    -2.82796544011261107e-17,
];

pub(super) const BIP_POS: [f64; 27] = [
    0.987619503657646569,
    0.00901080805844129798,
    -0.00283295222690408530,
    0.000854766236117954847,
    -0.000255853837635072156,
    0.0000769632896929759591,
    -0.0000232609109121609165,
    6.97203395216021043e-6,
    -2.01976163750936099e-6,
    5.43462514825866671e-7,
    -1.27149069505864346e-7,
    2.20360832678413611e-8,
    -7.13616911842868320e-10,
    -1.53764101266444771e-9,
    8.57078371715763776e-10,
    -3.07196638340721101e-10,
    8.40022926370606411e-11,
    -1.73580165104684102e-11,
    2.20526306617615816e-12,
    1.20431799193212533e-13,
    -1.72718963868364206e-13,
    5.98185937928623466e-14,
    -1.32793949891892906e-14,
    1.80870266199014164e-15,
    2.47958129804715333e-18,
    -8.43540077235620657e-17,
    2.79939327863985125e-17,
];

pub(super) const NEG_P: [f64; 25] = [
    0.999384945333264607,
    0.000727685546058665543,
    -0.000311279151011060118,
    0.000112681145570537276,
    -0.0000367227297570608051,
    0.0000111128587222500070,
    -3.17856992643364563e-6,
    8.69021437641500763e-7,
    -2.28849799307446505e-7,
    5.83729909409674841e-8,
    -1.44835559747573304e-8,
    3.50787646478121692e-9,
    -8.31746538778184910e-10,
    1.93568143364092902e-10,
    -4.43189504711570872e-11,
    1.00047309296623892e-11,
    -2.23141851120479189e-12,
    4.92695173959487069e-13,
    -1.07900982484590277e-13,
    2.34808602817699481e-14,
    -5.08618260509187246e-15,
    1.09837962061146026e-15,
    -2.36821969541429697e-16,
    5.10444371294886536e-17,
    -1.10101160940131521e-17,
];

pub(super) const NEG_Q: [f64; 23] = [
    0.00805902258857042214,
    -0.00540950182746431432,
    0.00151726448949792400,
    -0.000393691243545619486,
    0.0000972732452108016909,
    -0.0000231559674789665008,
    5.34056696575225039e-6,
    -1.19673592943554653e-6,
    2.60912461580880848e-7,
    -5.53696174362503028e-8,
    1.14339802419513954e-8,
    -2.29510994076786843e-9,
    4.46874400520619602e-10,
    -8.40981986880612140e-11,
    1.52038847863009679e-11,
    -2.61208347132742159e-12,
    4.17645722400083568e-13,
    -5.92892450952357409e-14,
    6.46713650158989496e-15,
    -1.29499917980320846e-16,
    -2.19907170574967343e-16,
    9.50677060025065118e-17,
    -2.95186155246514735e-17,
];

pub(super) const NEG_PV: [f64; 25] = [
    1.00072938776108733,
    -0.000864122199172049938,
    0.000370470560528206036,
    -0.000134519584205937305,
    0.0000440128653416340573,
    -0.0000133841957181068380,
    3.85094196306540606e-6,
    -1.06027792805832706e-6,
    2.81527024272391703e-7,
    -7.24988965865077322e-8,
    1.81869129593218480e-8,
    -4.46017636524222412e-9,
    1.07257047182282163e-9,
    -2.53593465124793155e-10,
    5.90930491885237872e-11,
    -1.36015240707733922e-11,
    3.09879776722952146e-12,
    -7.00158722084572258e-13,
    1.57174362684031456e-13,
    -3.51131279061806301e-14,
    7.81825058582876438e-15,
    -1.73729163652190199e-15,
    3.85695493057808841e-16,
    -8.56292468789410412e-17,
    1.90245510692309862e-17,
];

pub(super) const NEG_QV: [f64; 24] = [
    -0.0113113060336500133,
    0.00761589716558227440,
    -0.00214728600513034952,
    0.000561534465118108051,
    -0.000140267157462718792,
    0.0000338821542885428206,
    -7.96430727040337321e-6,
    1.82850737212758870e-6,
    -4.11056264800910555e-7,
    9.06551656682024104e-8,
    -1.96467067202417507e-8,
    4.19066102168877573e-9,
    -8.81219483316690728e-10,
    1.83007566475879093e-10,
    -3.76098439186797109e-11,
    7.66575005930047717e-12,
    -1.55352758172457921e-12,
    3.13902808638461877e-13,
    -6.34257251573999071e-14,
    1.28539969333836993e-14,
    -2.62040008734191589e-15,
    5.38710576465455305e-16,
    -1.11906220183398286e-16,
    2.35176490019349514e-17,
];

pub(super) const ASYM_U: [f64; 25] = [
    1.00000000000000000,
    0.0694444444444444444,
    0.0371334876543209877,
    0.0379930591278006401,
    0.0576491904126697213,
    0.116099064025515411,
    0.291591399230750511,
    0.877666969510016916,
    3.07945303017316699,
    12.3415733323452387,
    55.6227853659170828,
    278.465080777602567,
    1533.16943201279562,
    9207.20659972641470,
    59892.5135658790686,
    419524.875116551069,
    3148257.41786682638,
    25198919.8716023677,
    214288036.963680320,
    1929375549.18249305,
    18335766937.8905677,
    183418303528.832563,
    1926471158970.44656,
    21196999388647.6491,
    243826826879716.042,
];

pub(super) const ASYM_V: [f64; 25] = [
    1.00000000000000000,
    -0.0972222222222222222,
    -0.0438850308641975309,
    -0.0424628307898948331,
    -0.0626621634920323058,
    -0.124105896027275095,
    -0.308253764901079112,
    -0.920479992412944571,
    -3.21049358464862091,
    -12.8072930807356251,
    -57.5083035139142720,
    -287.033237109221108,
    -1576.35730333709972,
    -9446.35482309593196,
    -61335.7066638520582,
    -428952.400400069070,
    -3214536.52140086483,
    -25697908.3839113255,
    -218293420.832160326,
    -1963523788.99103275,
    -18643931088.1072159,
    -186352996385.293884,
    -1955882932389.84269,
    -21506444635197.2498,
    -247236992290621.161,
];
